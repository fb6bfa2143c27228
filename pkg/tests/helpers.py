"""Shared random generators for the test suite (all seeded by callers)."""
from marginlab.losses import loss_matrix
from marginlab.rationals import rat


def random_rational(rng, lo=-4, hi=4, max_den=4):
    return rat(rng.randint(lo, hi), rng.randint(1, max_den))


def random_score_vector(rng, k, lo=-4, hi=4, max_den=4):
    return tuple(random_rational(rng, lo, hi, max_den) for _ in range(k))


def random_simplex_point(rng, k, den=None):
    den = den or rng.randint(1, 12)
    cuts = sorted(rng.randint(0, den) for _ in range(k - 1))
    parts = [cuts[0]] + [b - a for a, b in zip(cuts, cuts[1:])] + [den - cuts[-1]]
    return tuple(rat(m, den) for m in parts)


def random_loss(rng, k, symmetric=False):
    while True:
        entries = [[rat(0)] * k for _ in range(k)]
        for y in range(k):
            for z in range(k):
                if y == z:
                    continue
                if symmetric and z < y:
                    entries[y][z] = entries[z][y]
                else:
                    entries[y][z] = rat(rng.randint(1, 6), rng.randint(1, 2))
        try:
            return loss_matrix(entries)
        except ValueError:  # pragma: no cover - entries are always positive
            continue


def random_distance(rng, k):
    """Rejection-sampled symmetric matrix satisfying the triangle inequality."""
    while True:
        loss = random_loss(rng, k, symmetric=True)
        e = loss.entries
        ok = all(
            e[y][z] <= e[y][w] + e[w][z]
            for y in range(k)
            for z in range(k)
            for w in range(k)
            if y != z and w not in (y, z)
        )
        if ok:
            return loss


def random_dominant_point(rng, k, den=8):
    """Simplex point whose largest coordinate is at least 1/2."""
    label = rng.randint(0, k - 1)
    top = rng.randint((den + 1) // 2, den)
    rest = den - top
    cuts = sorted(rng.randint(0, rest) for _ in range(k - 2)) if k > 2 else []
    parts = [cuts[0]] + [b - a for a, b in zip(cuts, cuts[1:])] + [rest - cuts[-1]] if cuts else [rest]
    others = iter(parts)
    q = []
    for i in range(k):
        q.append(rat(top, den) if i == label else rat(next(others), den))
    return tuple(q)
