import math
import random

import pytest
from hypothesis import settings

from thuemahler.forms import BinaryForm

settings.register_profile("repo", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("repo")

# area of |x^3 - 2y^3| <= 1 in closed form: substitute y -> y / 2^{1/3}
# and use area{|x^3 - y^3| <= 1} = B(1/3, 1/3)
SIGMA_X3_2Y3 = math.gamma(1 / 3) ** 2 / math.gamma(2 / 3) / 2 ** (1 / 3)


@pytest.fixture
def F():
    return BinaryForm((1, 0, 0, -2))


def random_forms(n, count, seed, H=6, irreducible=True):
    from thuemahler.forms import discriminant, is_irreducible

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        cs = tuple(rng.randint(-H, H) for _ in range(n + 1))
        if cs[0] == 0 or cs[-1] == 0:
            continue
        G = BinaryForm(cs)
        if discriminant(G) == 0:
            continue
        if irreducible and not is_irreducible(G):
            continue
        out.append(G)
    return out


def random_system(rng, max_primes=2):
    """A random approximation system from an irreducible cubic and its roots."""
    from fractions import Fraction

    from thuemahler import approx, padic

    while True:
        G = random_forms(3, 1, rng.randrange(10**9), H=5)[0]
        f = G.dehomogenize()
        places, roots = [], []
        reals = approx.RealRoot.all_of(f)
        if reals and rng.random() < 0.8:
            places.append(approx.INF)
            roots.append(rng.choice(reals))
        for P in rng.sample([2, 3, 5, 7, 11, 13], 4):
            if len(places) > max_primes:
                break
            rs = [r for r in padic.padic_roots(f, P, 24) if not r.pole and r.simple]
            if rs:
                places.append(P)
                roots.append(rng.choice(rs))
        if not places:
            continue
        den = rng.randint(1, 4)
        cuts = sorted(rng.randint(0, den) for _ in range(len(places) - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
        gammas = [Fraction(x, den) for x in parts]
        k = Fraction(rng.randint(2, 8), 2)
        beta1 = rng.choice([Fraction(5, 2), Fraction(3), Fraction(7, 2)])
        return approx.ApproxSystem(k, beta1, places, roots, gammas)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
