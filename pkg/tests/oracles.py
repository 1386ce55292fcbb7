"""Independent naive oracles used to validate the fast implementations.

Everything here enumerates index tuples directly with Python loops and
computes each Euclidean distance from the raw rows, the slow-but-obvious
way. Nothing is shared with the package's vectorized code paths.
"""

import itertools
import math


def norm(u):
    return math.sqrt(sum(a * a for a in u))


def rows_of(mat):
    return [list(map(float, r)) for r in mat]


def tuple_row(blocks, idxs):
    """Concatenation (X_1^{i_1}, ..., X_d^{i_d}) as a flat list."""
    out = []
    for b, i in zip(blocks, idxs):
        out.extend(b[i])
    return out


def split_blocks(sample):
    """Per-block row lists from a ComponentizedSample."""
    return [rows_of(sample.block(j)) for j in range(sample.d)]


def oracle_dcov_sq(x_rows, y_rows):
    """Squared distance covariance by full index enumeration."""
    n = len(x_rows)
    a = [[norm([p - q for p, q in zip(x_rows[k], x_rows[l])]) for l in range(n)] for k in range(n)]
    b = [[norm([p - q for p, q in zip(y_rows[k], y_rows[l])]) for l in range(n)] for k in range(n)]
    s1 = sum(a[k][l] * b[k][l] for k in range(n) for l in range(n)) / n**2
    s2 = (
        sum(a[k][l] for k in range(n) for l in range(n))
        * sum(b[m][r] for m in range(n) for r in range(n))
        / n**4
    )
    s3 = sum(a[k][l] * b[k][m] for k in range(n) for l in range(n) for m in range(n)) / n**3
    return s1 + s2 - 2.0 * s3


def oracle_dcov_sq_centered(x_rows, y_rows):
    """Second route: explicit double centering then mean of products."""
    n = len(x_rows)

    def dmat(rows):
        return [[norm([p - q for p, q in zip(rows[k], rows[l])]) for l in range(n)] for k in range(n)]

    def center(m):
        rmean = [sum(m[k]) / n for k in range(n)]
        cmean = [sum(m[k][l] for k in range(n)) / n for l in range(n)]
        total = sum(rmean) / n
        return [[m[k][l] - rmean[k] - cmean[l] + total for l in range(n)] for k in range(n)]

    a = center(dmat(x_rows))
    b = center(dmat(y_rows))
    return sum(a[k][l] * b[k][l] for k in range(n) for l in range(n)) / n**2


def oracle_cyclic_proxy(blocks):
    """Proxy rows by the index formula: row k takes block j from row (k+j) mod n."""
    n = len(blocks[0])
    out = []
    for k in range(n):
        out.append(tuple_row(blocks, [(k + j) % n for j in range(len(blocks))]))
    return out


def oracle_q_complete(blocks):
    """Complete measure: exhaustive sums over all index tuples.

    2/n^(d+1) * sum |X^k - tuple(l_1..l_d)|
    - 1/n^2    * sum |X^k - X^l|
    - 1/n^(2d) * sum |tuple(k_1..k_d) - tuple(l_1..l_d)|
    """
    n = len(blocks[0])
    d = len(blocks)
    sample_rows = [tuple_row(blocks, [k] * d) for k in range(n)]

    t1 = 0.0
    for k in range(n):
        for idxs in itertools.product(range(n), repeat=d):
            t1 += norm([p - q for p, q in zip(sample_rows[k], tuple_row(blocks, idxs))])
    t1 *= 2.0 / n ** (d + 1)

    t2 = sum(
        norm([p - q for p, q in zip(sample_rows[k], sample_rows[l])])
        for k in range(n)
        for l in range(n)
    ) / n**2

    t3 = 0.0
    for kid in itertools.product(range(n), repeat=d):
        left = tuple_row(blocks, kid)
        for lid in itertools.product(range(n), repeat=d):
            t3 += norm([p - q for p, q in zip(left, tuple_row(blocks, lid))])
    t3 /= n ** (2 * d)

    return t1 - t2 - t3


def oracle_q_star(blocks):
    """Simplified complete measure via explicitly built proxy rows."""
    n = len(blocks[0])
    d = len(blocks)
    sample_rows = [tuple_row(blocks, [k] * d) for k in range(n)]
    proxy_rows = oracle_cyclic_proxy(blocks)

    def avg_dist(rows_a, rows_b):
        return sum(
            norm([p - q for p, q in zip(rows_a[k], rows_b[l])])
            for k in range(n)
            for l in range(n)
        ) / n**2

    return (
        2.0 * avg_dist(sample_rows, proxy_rows)
        - avg_dist(sample_rows, sample_rows)
        - avg_dist(proxy_rows, proxy_rows)
    )


def _group_rows(blocks, group):
    n = len(blocks[0])
    return [[v for j in group for v in blocks[j][k]] for k in range(n)]


def _recombinations(d, symmetric):
    if symmetric:
        return [(c, [j for j in range(d) if j != c]) for c in range(d)]
    return [(c, list(range(c + 1, d))) for c in range(d - 1)]


def oracle_pair_sum(blocks, pair_stat, symmetric):
    total = 0.0
    for c, group in _recombinations(len(blocks), symmetric):
        total += pair_stat([blocks[c], _group_rows(blocks, group)])
    return total


def oracle_r_asym(blocks):
    return oracle_pair_sum(blocks, lambda bs: oracle_dcov_sq(bs[0], bs[1]), symmetric=False)


def oracle_s_sym(blocks):
    return oracle_pair_sum(blocks, lambda bs: oracle_dcov_sq(bs[0], bs[1]), symmetric=True)


def oracle_j_asym(blocks):
    return oracle_pair_sum(blocks, oracle_q_complete, symmetric=False)


def oracle_i_sym(blocks):
    return oracle_pair_sum(blocks, oracle_q_complete, symmetric=True)


def oracle_j_star(blocks):
    return oracle_pair_sum(blocks, oracle_q_star, symmetric=False)


def oracle_i_star(blocks):
    return oracle_pair_sum(blocks, oracle_q_star, symmetric=True)


def oracle_u3_terms(blocks):
    """The twelve terms of the 3-block factorized-weight measure.

    Expectations over c independent copies become averages over c free
    indices; up to four indices per term.
    """
    assert len(blocks) == 3
    n = len(blocks[0])

    def bd(b, k, l):
        return norm([p - q for p, q in zip(b[k], b[l])])

    rng2 = list(itertools.product(range(n), repeat=2))
    a, b, c = blocks

    t_triple_same = -sum(bd(a, k, l) * bd(b, k, l) * bd(c, k, l) for k, l in rng2) / n**2
    t_triple_free = (
        2.0
        * sum(
            bd(a, k, l) * bd(b, k, m) * bd(c, k, r)
            for k in range(n)
            for l in range(n)
            for m in range(n)
            for r in range(n)
        )
        / n**4
    )
    t_triple_prod = -(
        sum(bd(a, k, l) for k, l in rng2)
        * sum(bd(b, k, l) for k, l in rng2)
        * sum(bd(c, k, l) for k, l in rng2)
        / n**6
    )

    terms = [t_triple_same, t_triple_free, t_triple_prod]
    for u, v in [(a, b), (a, c), (b, c)]:
        terms.append(sum(bd(u, k, l) * bd(v, k, l) for k, l in rng2) / n**2)
    for u, v in [(a, b), (a, c), (b, c)]:
        terms.append(
            -2.0
            * sum(bd(u, k, l) * bd(v, k, m) for k in range(n) for l in range(n) for m in range(n))
            / n**3
        )
    for u, v in [(a, b), (a, c), (b, c)]:
        terms.append(
            sum(bd(u, k, l) for k, l in rng2) * sum(bd(v, k, l) for k, l in rng2) / n**4
        )
    return terms


def oracle_u3(blocks):
    return sum(oracle_u3_terms(blocks))


def oracle_kendall_tau(x, y):
    """tau-a by explicit pair enumeration; ties contribute zero."""
    n = len(x)
    score = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = int(x[i] > x[j]) - int(x[i] < x[j])
            dy = int(y[i] > y[j]) - int(y[i] < y[j])
            score += dx * dy
    return score / (n * (n - 1) / 2)


def oracle_spearman_rho(x, y):
    """Average ranks then Pearson correlation, all by hand."""

    def ranks(v):
        order = sorted(range(len(v)), key=lambda i: v[i])
        r = [0.0] * len(v)
        i = 0
        while i < len(v):
            j = i
            while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
                j += 1
            avg = (i + j) / 2.0 + 1.0
            for t in range(i, j + 1):
                r[order[t]] = avg
            i = j + 1
        return r

    rx, ry = ranks(list(x)), ranks(list(y))
    n = len(rx)
    mx, my = sum(rx) / n, sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    vy = math.sqrt(sum((b - my) ** 2 for b in ry))
    return cov / (vx * vy)
