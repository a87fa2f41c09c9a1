"""Brute-force references used by the tests.

Nothing here calls the library's own enumerators or closure code; every
helper works straight from the order matrix and the multiplication table.
"""
import itertools


def lub(leq, a, b):
    n = len(leq)
    ups = [c for c in range(n) if leq[a][c] and leq[b][c]]
    least = [c for c in ups if all(leq[c][d] for d in ups)]
    return least[0] if least else None


def glb(leq, a, b):
    n = len(leq)
    downs = [c for c in range(n) if leq[c][a] and leq[c][b]]
    great = [c for c in downs if all(leq[d][c] for d in downs)]
    return great[0] if great else None


def antitone_maps(dom_leq, lat_leq, pin=None):
    """Every antitone map as a value tuple, by filtering the full product."""
    n, k = len(dom_leq), len(lat_leq)
    for vals in itertools.product(range(k), repeat=n):
        if pin is not None and any(vals[i] != v for i, v in pin.items()):
            continue
        if all(lat_leq[vals[b]][vals[a]] for a in range(n) for b in range(n) if dom_leq[a][b]):
            yield vals


def least_postcondition(src_n, tgt_leq, lat_leq, star, m_vals, image_vals):
    """Pointwise meet of every antitone target map above all ``m(a) * phi(a)(b)``."""
    need = [[star[m_vals[a]][image_vals[a][b]] for b in range(len(tgt_leq))] for a in range(src_n)]
    posts = [v for v in antitone_maps(tgt_leq, lat_leq)
             if all(lat_leq[need[a][b]][v[b]] for a in range(src_n) for b in range(len(tgt_leq)))]
    out = []
    for b in range(len(tgt_leq)):
        acc = posts[0][b]
        for v in posts[1:]:
            acc = glb(lat_leq, acc, v[b])
        out.append(acc)
    return out


def partial_orders(n):
    """All partial orders on ``range(n)`` as boolean matrices (labelled, not up to isomorphism)."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        rel = [[a == b for b in range(n)] for a in range(n)]
        for (a, b), on in zip(pairs, bits):
            rel[a][b] = on
        if any(rel[a][b] and rel[b][a] for a, b in pairs):
            continue
        if any(rel[a][b] and rel[b][c] and not rel[a][c]
               for a in range(n) for b in range(n) for c in range(n)):
            continue
        yield rel


def max_k(m, ok):
    """Largest ``k`` in ``0..m`` with ``ok(k)``, by checking every ``k``."""
    return max(k for k in range(m + 1) if ok(k))
