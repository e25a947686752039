import pytest

from hypmodp.hypergeometric import PrimeContext, parse_params

T_PARAMS = ("1/2,1/2", "1,1")
F_PARAMS = ("1/3,1/2", "5/12,1")
G_PARAMS = ("1/9,4/9,5/9", "1/3,1,1")

# every fixture system at two primes where the prime does not divide d
FIXTURES = [
    ("t", T_PARAMS, 3),
    ("t", T_PARAMS, 5),
    ("f", F_PARAMS, 13),
    ("f", F_PARAMS, 37),
    ("g", G_PARAMS, 17),
    ("g", G_PARAMS, 19),
]


def system(params):
    return parse_params(*params)


def ctx(params, p):
    return PrimeContext(system(params), p)


@pytest.fixture
def t_sys():
    return system(T_PARAMS)


@pytest.fixture
def f_sys():
    return system(F_PARAMS)


@pytest.fixture
def g_sys():
    return system(G_PARAMS)
