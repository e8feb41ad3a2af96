from __future__ import annotations

import copy

import pytest
import yaml

from u5free.certificates import (
    INVALID,
    VALID,
    CertificateFormatError,
    dump_document,
    from_data,
    load_document,
    to_data,
    verdict,
    verify_certificate,
    verify_document,
)
from u5free.core import relabel, transitive
from u5free.generators import compose, gen_extremal, gen_family, gen_random, gen_random_u5free
from u5free.structure import Critical, ForbiddenCopy, Partition, TrianglePartition, certify_u5_status

U5 = gen_family("U", 5)


def sample_instances():
    yield U5
    yield gen_family("T", 9)
    yield gen_family("W", 7)
    yield gen_family("P", 8)
    yield gen_extremal(2)
    yield transitive(5)
    yield compose(gen_family("T", 3), [U5, transitive(1), transitive(2)])[0]
    for seed in range(12):
        yield gen_random(6 + seed, seed)
        yield gen_random_u5free(10 + 3 * seed, seed)


def int_lists(data, path=()):
    """Paths to every list of integers inside a certificate's data."""
    if isinstance(data, dict):
        for k, v in data.items():
            yield from int_lists(v, path + (k,))
    elif isinstance(data, list):
        if all(isinstance(v, int) for v in data):
            yield path
        else:
            for i, v in enumerate(data):
                yield from int_lists(v, path + (i,))


def at(data, path):
    for p in path:
        data = data[p]
    return data


def test_round_trip_through_yaml():
    for t in sample_instances():
        cert = certify_u5_status(t)
        assert from_data(to_data(cert)) == cert
        text = dump_document(cert, t.n)
        n, claimed, back = load_document(text)
        assert n == t.n and back == cert
        assert claimed == ("contains-u5" if isinstance(cert, ForbiddenCopy) else "u5-free")
        assert verify_document(t, text) == []
        assert verdict(t, cert) == VALID


def test_document_layout():
    doc = yaml.safe_load(dump_document(certify_u5_status(U5), 5))
    assert doc == {
        "format": "u5free-certificate", "version": 1, "n": 5, "verdict": "contains-u5",
        "certificate": {"type": "forbidden-copy", "pattern": "U5", "image": [0, 1, 2, 3, 4]},
    }


def test_every_adjacent_swap_and_duplicate_is_caught():
    tampers = 0
    for t in sample_instances():
        data = to_data(certify_u5_status(t))
        for path in int_lists(data):
            seq = at(data, path)
            for k in range(len(seq) - 1):
                if seq[k] == seq[k + 1]:
                    continue
                for mode in ("swap", "dup"):
                    bad = copy.deepcopy(data)
                    s = at(bad, path)
                    if mode == "swap":
                        s[k], s[k + 1] = s[k + 1], s[k]
                    else:
                        s[k + 1] = s[k]
                    assert verdict(t, from_data(bad)) == INVALID, (path, k, mode)
                    tampers += 1
    assert tampers > 500


def test_wrong_tournament_is_rejected():
    t = gen_random_u5free(20, 4)
    cert = certify_u5_status(t)
    other = relabel(t, list(range(1, 20)) + [0])
    assert other != t
    assert verify_certificate(other, cert)
    assert verify_certificate(gen_family("T", 5), certify_u5_status(U5))
    text = dump_document(cert, t.n)
    assert verify_document(gen_random_u5free(21, 4), text)


def test_direct_rejections():
    w5 = gen_family("W", 5)
    assert verify_certificate(w5, Critical(5, (0, 1, 2, 3, 4)))
    assert verify_certificate(w5, Partition(TrianglePartition((0,), (1, 3), (2,))))
    assert verify_certificate(U5, ForbiddenCopy((0, 1, 2, 3)))
    assert verify_certificate(U5, ForbiddenCopy((0, 1, 2, 3, 9)))
    assert verify_certificate(gen_family("T", 5), Critical(4, (0, 1, 2, 3)))


def test_claimed_verdict_must_match_certificate():
    text = dump_document(certify_u5_status(U5), 5).replace("contains-u5", "u5-free")
    assert any("verdict" in p for p in verify_document(U5, text))


@pytest.mark.parametrize("text", [
    "not: [valid",
    "format: other\n",
    "format: u5free-certificate\nversion: 2\n",
    "format: u5free-certificate\nversion: 1\nn: -1\nverdict: u5-free\n",
    "format: u5free-certificate\nversion: 1\nn: 3\nverdict: maybe\n",
    "format: u5free-certificate\nversion: 1\nn: 3\nverdict: u5-free\ncertificate: {type: circular, n: 3, mapping: [0, x]}\n",
    "format: u5free-certificate\nversion: 1\nn: 3\nverdict: u5-free\ncertificate: {type: spiral}\n",
])
def test_malformed_documents(text):
    with pytest.raises(CertificateFormatError):
        load_document(text)
