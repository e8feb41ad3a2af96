"""Recognition, structure and transitive subtournaments of U5-free tournaments."""

from .core import Tournament, TournamentError, induced, dual, relabel
from .decomposition import ContractViolation, is_prime, substitution_decomposition
from .generators import gen_family, gen_extremal, gen_random, gen_random_u5free
from .detection import find_embedding, enumerate_tournaments

__version__ = "0.1.0"
