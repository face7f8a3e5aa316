"""Full-tensor model of divided powers, used as an independent oracle.

Tensors are dicts from index tuples (one index per factor) to coefficients.
"""

import itertools
from collections import defaultdict


def pure(m, d):
    out = {}
    for idx in itertools.product(range(len(m)), repeat=d):
        c = 1
        for i in idx:
            c = c * m[i]
        if c:
            out[idx] = c
    return out


def from_gamma(space, coords):
    out = defaultdict(int)
    for key, c in zip(space.keys, coords):
        if c:
            for perm in set(itertools.permutations(key)):
                out[perm] = out[perm] + c
    return dict(out)


def to_gamma(space, tensor):
    for idx, c in tensor.items():
        assert tensor.get(tuple(sorted(idx)), 0) == c, "tensor is not symmetric"
    return tuple(tensor.get(key, space.base.zero) for key in space.keys)


def shuffle(t1, d1, t2, d2):
    out = defaultdict(int)
    d = d1 + d2
    for positions in itertools.combinations(range(d), d1):
        rest = [p for p in range(d) if p not in positions]
        for i1, c1 in t1.items():
            for i2, c2 in t2.items():
                idx = [0] * d
                for p, i in zip(positions, i1):
                    idx[p] = i
                for p, i in zip(rest, i2):
                    idx[p] = i
                out[tuple(idx)] = out[tuple(idx)] + c1 * c2
    return {k: v for k, v in out.items() if v}


def act(matrices, g, x):
    """Componentwise action: (a_1⊗…⊗a_d)(m_1⊗…⊗m_d) = a_1 m_1 ⊗ … ⊗ a_d m_d."""
    out = defaultdict(int)
    dim = matrices[0].nrows
    for ia, ca in g.items():
        for im, cm in x.items():
            columns = [matrices[a].column(m) for a, m in zip(ia, im)]
            for idx in itertools.product(range(dim), repeat=len(ia)):
                c = ca * cm
                for col, k in zip(columns, idx):
                    c = c * col[k]
                    if not c:
                        break
                if c:
                    out[idx] = out[idx] + c
    return {k: v for k, v in out.items() if v}
