"""Random instance factories shared by the test modules."""

import random
from fractions import Fraction

from typed_contracts.instance import make_instance


def rand_dist(rng, m, den=12):
    cuts = sorted(rng.randint(0, den) for _ in range(m - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return [Fraction(p, den) for p in parts]


def random_instance(
    rng, T=None, n=None, m=None, den=12, cost_varying=False, max_dim=4
):
    T = T or rng.randint(1, max_dim)
    n = n or rng.randint(1, max_dim)
    m = m or rng.randint(1, max_dim)
    rewards = [Fraction(rng.randint(0, 2 * den), den) for _ in range(m)]
    forecasts = [[rand_dist(rng, m, den) for _ in range(n)] for _ in range(T)]
    raw = [rng.randint(1, 6) for _ in range(T)]
    weights = [Fraction(v, sum(raw)) for v in raw]

    def cost_row():
        row = [Fraction(0)] + [Fraction(rng.randint(0, den), den) for _ in range(n - 1)]
        rng.shuffle(row)
        return row

    if cost_varying:
        return make_instance(
            rewards=rewards, forecasts=forecasts, costs_per_type=[cost_row() for _ in range(T)],
            weights=weights,
        )
    return make_instance(rewards=rewards, forecasts=forecasts, costs=cost_row(), weights=weights)


def rng_for(seed):
    return random.Random(seed)
