"""Catalog of identities that must vanish in the coordinate algebras.

Each entry is ``lhs - rhs``.  Families:

* commutation among the u's (row, column, antidiagonal, diagonal exchange);
* unitarity of U (rows and columns);
* twisted determinants;
* commutation of u's with adjoints;
* the special cases involving the corner generator u[N,N].
"""

from __future__ import annotations

import itertools
from typing import List, NamedTuple

from .coeffs import ONE, Q, QINV
from .core import AlgebraCtx, AlgElt
from .determinants import permutation_sign_power, quantum_determinant, twisted_determinant


class Relation(NamedTuple):
    family: str
    label: str
    elt: AlgElt


def _uu(ctx: AlgebraCtx) -> List[Relation]:
    N = ctx.N
    u = ctx.u
    out = []
    rng = range(1, N + 1)
    for i, j, k, l in itertools.product(rng, rng, rng, rng):
        if i < k and j == l:
            out.append(Relation("uu-column", f"{i}{j},{k}{j}", u(i, j) * u(k, j) - Q * (u(k, j) * u(i, j))))
        if i == k and j < l:
            out.append(Relation("uu-row", f"{i}{j},{i}{l}", u(i, j) * u(i, l) - Q * (u(i, l) * u(i, j))))
        if i < k and j > l:
            out.append(Relation("uu-antidiagonal", f"{i}{j},{k}{l}", u(i, j) * u(k, l) - u(k, l) * u(i, j)))
        if i < k and j < l:
            out.append(Relation("uu-diagonal", f"{i}{j},{k}{l}",
                                u(i, j) * u(k, l) - u(k, l) * u(i, j) + (QINV - Q) * (u(i, l) * u(k, j))))
    return out


def _unitarity(ctx: AlgebraCtx) -> List[Relation]:
    N = ctx.N
    u, us = ctx.u, ctx.ustar
    out = []
    for j in range(1, N + 1):
        for k in range(1, N + 1):
            rows = sum((u(j, s) * us(k, s) for s in range(1, N + 1)), ctx.zero())
            cols = sum((us(s, j) * u(s, k) for s in range(1, N + 1)), ctx.zero())
            d = ctx.one() if j == k else ctx.zero()
            out.append(Relation("unitarity-rows", f"{j}{k}", rows - d))
            out.append(Relation("unitarity-columns", f"{j}{k}", cols - d))
    return out


def _twisted(ctx: AlgebraCtx) -> List[Relation]:
    N = ctx.N
    out = []
    rhs_base = ctx.one() if ctx.variant == "SUq" else quantum_determinant(ctx)
    for tau in itertools.permutations(range(1, N + 1)):
        elt = twisted_determinant(ctx, tau) - rhs_base.scale(permutation_sign_power(tau))
        out.append(Relation("twisted-determinant", "".join(map(str, tau)), elt))
    if ctx.variant == "Uq":
        D = quantum_determinant(ctx)
        out.append(Relation("determinant-inverse", "D Dinv", D * ctx.dinv() - ctx.one()))
        out.append(Relation("determinant-inverse", "Dinv D", ctx.dinv() * D - ctx.one()))
    return out


def _star(ctx: AlgebraCtx) -> List[Relation]:
    N = ctx.N
    u, us = ctx.u, ctx.ustar
    one_minus_q2 = ONE - Q * Q
    rng = range(1, N + 1)
    out = []
    for i, j, k, l in itertools.product(rng, rng, rng, rng):
        if i != k and j != l:
            out.append(Relation("ustar-disjoint", f"{i}{j},{k}{l}", u(i, j) * us(k, l) - us(k, l) * u(i, j)))
    for i, k, j in itertools.product(rng, rng, rng):
        if i != k:
            rhs = Q * (us(k, j) * u(i, j)) - sum((u(i, p) * us(k, p) for p in range(1, j)), ctx.zero()).scale(one_minus_q2)
            out.append(Relation("ustar-same-column", f"{i}{j},{k}{j}", u(i, j) * us(k, j) - rhs))
    for i, j, l in itertools.product(rng, rng, rng):
        if j != l:
            rhs = QINV * (us(i, l) * u(i, j)) + sum((us(s, l) * u(s, j) for s in range(i + 1, N + 1)),
                                                     ctx.zero()).scale(QINV - Q)
            out.append(Relation("ustar-same-row", f"{i}{j},{i}{l}", u(i, j) * us(i, l) - rhs))
    for i, j in itertools.product(rng, rng):
        rhs = (us(i, j) * u(i, j)
               + sum((us(s, j) * u(s, j) for s in range(i + 1, N + 1)), ctx.zero()).scale(one_minus_q2)
               - sum((u(i, p) * us(i, p) for p in range(1, j)), ctx.zero()).scale(one_minus_q2))
        out.append(Relation("ustar-same-entry", f"{i}{j}", u(i, j) * us(i, j) - rhs))
    return out


def _corner(ctx: AlgebraCtx) -> List[Relation]:
    N = ctx.N
    u, us = ctx.u, ctx.ustar
    out = []
    for j in range(1, N):
        out.append(Relation("corner-column", f"{j}", u(j, N) * u(N, N) - Q * (u(N, N) * u(j, N))))
        out.append(Relation("corner-row", f"{j}", u(N, j) * u(N, N) - Q * (u(N, N) * u(N, j))))
        for k in range(1, N):
            out.append(Relation("corner-antidiagonal", f"{j},{k}", u(j, N) * u(N, k) - u(N, k) * u(j, N)))
            out.append(Relation("corner-diagonal", f"{j},{k}",
                                u(j, k) * u(N, N) - u(N, N) * u(j, k) + (QINV - Q) * (u(j, N) * u(N, k))))
            if j != k:
                out.append(Relation("corner-star-row", f"{j},{k}", u(N, j) * us(N, k) - QINV * (us(N, k) * u(N, j))))
                out.append(Relation("corner-star-column", f"{j},{k}", u(j, N) * us(k, N) - QINV * (us(k, N) * u(j, N))))
    out.append(Relation("corner-star", "NN", us(N, N) * u(N, N) - (Q * Q) * (u(N, N) * us(N, N))
                        - ctx.scalar(ONE - Q * Q)))
    return out


def relation_catalog_named(ctx: AlgebraCtx) -> List[Relation]:
    """All catalog identities with family names and index labels."""
    out = _uu(ctx)
    if ctx.variant == "Mq":
        return out
    out += _unitarity(ctx) + _twisted(ctx) + _star(ctx)
    if ctx.N >= 2:
        out += _corner(ctx)
    return out


def relation_catalog(ctx: AlgebraCtx) -> List[AlgElt]:
    """Elements (lhs - rhs) that vanish in the algebra of ``ctx``."""
    return [r.elt for r in relation_catalog_named(ctx)]


def unitarity_relations(ctx: AlgebraCtx) -> List[Relation]:
    return _unitarity(ctx)


def relation_degree(rel: Relation, N: int) -> int:
    """Word length of the relation (used to choose the valid truncation window)."""
    return rel.elt.degree()


__all__ = ["Relation", "relation_catalog", "relation_catalog_named", "unitarity_relations",
           "relation_degree"]
