"""Independent brute-force reference implementations.

Deliberately written as plain double loops with no shared code with the
library, so the two can cross-check each other. The k-dominance
threshold uses exact rational arithmetic instead of the library's
cross-multiplied float comparison.
"""

from fractions import Fraction


def counts(a, b):
    nb = ne = nw = 0
    for x, y in zip(a, b, strict=True):
        if x > y:
            nb += 1
        elif x < y:
            nw += 1
        else:
            ne += 1
    return nb, ne, nw


def pareto(a, b):
    none_worse = all(x >= y for x, y in zip(a, b, strict=True))
    some_better = any(x > y for x, y in zip(a, b, strict=True))
    return none_worse and some_better


def kdom(a, b, k):
    nb, ne, nw = counts(a, b)
    m = nb + ne + nw
    if ne == m:
        return False
    return Fraction(nb) >= Fraction(m - ne) / (Fraction(k) + 1)


def pr_list(vectors):
    return [
        float(sum(1 for j, b in enumerate(vectors) if j != i and pareto(a, b)))
        for i, a in enumerate(vectors)
    ]


def kd_list(vectors, k):
    return [
        float(sum(1 for j, b in enumerate(vectors) if j != i and kdom(a, b, k)))
        for i, a in enumerate(vectors)
    ]


def ranks_desc(values):
    """1-based positions by descending value; a tie group shares its average."""
    out = []
    for v in values:
        better = sum(1 for w in values if w > v)
        equal = sum(1 for w in values if w == v)  # includes v itself
        out.append(better + (equal + 1) / 2)
    return out


def ar_list(vectors):
    m = len(vectors[0])
    column_ranks = [ranks_desc([v[c] for v in vectors]) for c in range(m)]
    return [sum(column_ranks[c][i] for c in range(m)) for i in range(len(vectors))]


def mr_list(vectors):
    m = len(vectors[0])
    column_ranks = [ranks_desc([v[c] for v in vectors]) for c in range(m)]
    return [min(column_ranks[c][i] for c in range(m)) for i in range(len(vectors))]


def gain(a, b):
    return sum(max(0.0, x - y) for x, y in zip(a, b, strict=True))


def gd_list(vectors):
    return [
        sum(gain(a, b) for j, b in enumerate(vectors) if j != i)
        for i, a in enumerate(vectors)
    ]


def pg_list(vectors):
    if len(vectors) == 1:
        return [0.0]
    out = []
    for i, a in enumerate(vectors):
        outgoing = max(gain(a, b) for j, b in enumerate(vectors) if j != i)
        incoming = max(gain(b, a) for j, b in enumerate(vectors) if j != i)
        out.append(outgoing - incoming)
    return out


def norm_sub(scores, lower_better):
    n = len(scores)
    oriented = [-s for s in scores] if lower_better else list(scores)
    return [(n - rho) / n for rho in ranks_desc(oriented)]


SUB_LOWER_BETTER = {"ar": True, "mr": True, "gd": False, "pg": False}
SUB_FNS = {"ar": ar_list, "mr": mr_list, "gd": gd_list, "pg": pg_list}


def hybrid_list(vectors, major_kind, k, sub_kind):
    if major_kind == "pr":
        majors = pr_list(vectors)
    else:
        majors = kd_list(vectors, k)
    subs = norm_sub(SUB_FNS[sub_kind](vectors), SUB_LOWER_BETTER[sub_kind])
    return [a + b for a, b in zip(majors, subs)]
