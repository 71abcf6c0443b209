"""Vectorised L-polynomials for whole blocks of discriminants.

For every monic irreducible P of degree k <= nmax the residue field A/P is
tabulated once (its squares are marked by squaring all q**k residues).
A block of discriminants is then reduced mod P with one matrix product, the
character values chi_D(P) are read off the table, and per-degree tallies of
chi_D(P) = +1 / -1 / 0 feed the Euler product

    L(u, chi_D) = prod_k (1 - u^k)^(-n_plus[k]) (1 + u^k)^(-n_minus[k]),

truncated at u**nmax.  All arithmetic is exact; the final coefficients are
integers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .poly import irreducible_table

_D_ROWS = 8192
_P_GROUP = 64


def _digits(indices: np.ndarray, n: int, q: int) -> np.ndarray:
    out = np.empty((len(indices), n), dtype=np.int64)
    rest = indices.astype(np.int64)
    for i in range(n):
        out[:, i] = rest % q
        rest = rest // q
    return out


def monic_matrix(q: int, n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows are the coefficient vectors (ascending, leading 1) of monic
    degree-n polynomials with enumeration index in ``[start, stop)``."""
    stop = q**n if stop is None else min(stop, q**n)
    idx = np.arange(start, stop, dtype=np.int64)
    mat = np.empty((len(idx), n + 1), dtype=np.int64)
    mat[:, :n] = _digits(idx, n, q)
    mat[:, n] = 1
    return mat


def _power_basis(moduli: np.ndarray, nrows: int, q: int) -> np.ndarray:
    """``out[j, i]`` = T**i mod moduli[j] for monic moduli given as (m, k+1) rows."""
    m, k1 = moduli.shape
    k = k1 - 1
    out = np.zeros((m, nrows, k), dtype=np.int64)
    row = np.zeros((m, k), dtype=np.int64)
    row[:, 0] = 1 if k > 0 else 0
    for i in range(nrows):
        out[:, i, :] = row
        top = row[:, k - 1].copy()
        row = np.roll(row, 1, axis=1)
        row[:, 0] = 0
        row = (row - top[:, None] * moduli[:, :k]) % q
    return out


def _reduce(dmat: np.ndarray, basis: np.ndarray, q: int) -> np.ndarray:
    """Residues of every row of ``dmat`` modulo every modulus; shape (N, m, k)."""
    m, nrows, k = basis.shape
    flat = basis.transpose(1, 0, 2).reshape(nrows, m * k).astype(np.float64)
    # entries stay far below 2**31, so the float products are exact
    prod = np.asarray(dmat, dtype=np.float64) @ flat
    return (prod.astype(np.int32) % np.int32(q)).reshape(len(dmat), m, k)


def _encode(res: np.ndarray, q: int) -> np.ndarray:
    """Integer index sum(r_i q**i) of residue vectors along the last axis."""
    k = res.shape[-1]
    idx = res[..., k - 1].astype(np.int64)
    for i in range(k - 2, -1, -1):
        idx *= q
        idx += res[..., i]
    return idx


@lru_cache(maxsize=4)
def _square_coefficients(q: int, k: int) -> np.ndarray:
    """Coefficients (degree < 2k-1) of x**2 for every residue x of degree < k."""
    E = _digits(np.arange(q**k, dtype=np.int64), k, q)
    c = np.zeros((len(E), 2 * k - 1), dtype=np.int64)
    for i in range(k):
        c[:, i : i + k] += E[:, i : i + 1] * E
    return (c % q).astype(np.float64)


def _square_tables(polys: np.ndarray, q: int) -> np.ndarray:
    """int8 tables over each A/P: 0 at 0, +1 on nonzero squares, -1 elsewhere."""
    m, k1 = polys.shape
    k = k1 - 1
    tables = np.full((m, q**k), -1, dtype=np.int8)
    c = _square_coefficients(q, k)
    red = _power_basis(polys, 2 * k - 1, q)[:, k:, :]  # (m, k-1, k)
    for s in range(0, m, _P_GROUP):
        grp = red[s : s + _P_GROUP]
        g = len(grp)
        if k > 1:
            flat = grp.transpose(1, 0, 2).reshape(k - 1, g * k).astype(np.float64)
            r = c[:, None, :k] + (c[:, k:] @ flat).reshape(len(c), g, k)
        else:
            r = np.broadcast_to(c[:, None, :], (len(c), g, 1)).copy()
        idx = _encode(r.astype(np.int32) % np.int32(q), q)  # (q**k, g)
        for j in range(g):
            tables[s + j, idx[:, j]] = 1
    tables[:, 0] = 0
    return tables


@lru_cache(maxsize=8)
def prime_data(q: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Irreducibles of degree k as (pi, k+1) rows and their square tables (pi, q**k)."""
    polys = np.array(irreducible_table(q, k), dtype=np.int64)
    return polys, _square_tables(polys, q)


def squarefree_mask(dmat: np.ndarray, q: int) -> np.ndarray:
    """True for rows not divisible by P**2 for any irreducible P."""
    n = dmat.shape[1] - 1
    keep = np.ones(len(dmat), dtype=bool)
    for k in range(1, n // 2 + 1):
        polys = np.array(irreducible_table(q, k), dtype=np.int64)
        squares = np.array([np.convolve(P, P) % q for P in polys], dtype=np.int64)
        basis = _power_basis(squares, n + 1, q)
        for s in range(0, len(squares), _P_GROUP):
            res = _reduce(dmat, basis[s : s + _P_GROUP], q)
            keep &= ~np.any(np.all(res == 0, axis=2), axis=1)
    return keep


def character_counts(dmat: np.ndarray, q: int, nmax: int) -> np.ndarray:
    """``counts[i, k, v]`` = number of monic irreducible P of degree k with
    chi_{D_i}(P) = (0, +1, -1)[v], for 1 <= k <= nmax."""
    N, ncols = dmat.shape
    counts = np.zeros((N, nmax + 1, 3), dtype=np.int64)
    for k in range(1, nmax + 1):
        polys, tables = prime_data(q, k)
        basis = _power_basis(polys, ncols, q)
        for s in range(0, len(polys), _P_GROUP):
            b = basis[s : s + _P_GROUP]
            tab = tables[s : s + _P_GROUP]
            sel = np.arange(len(b))[None, :]
            for r0 in range(0, N, _D_ROWS):
                res = _reduce(dmat[r0 : r0 + _D_ROWS], b, q)
                chi = tab[sel, _encode(res, q)]
                counts[r0 : r0 + _D_ROWS, k, 0] += np.count_nonzero(chi == 0, axis=1)
                counts[r0 : r0 + _D_ROWS, k, 1] += np.count_nonzero(chi == 1, axis=1)
                counts[r0 : r0 + _D_ROWS, k, 2] += np.count_nonzero(chi == -1, axis=1)
    return counts


def _series_dtype(q: int, nmax: int):
    return np.int64 if (nmax + 1) * q**nmax < 2**62 else object


def euler_expand(counts: np.ndarray, q: int, nmax: int) -> np.ndarray:
    """Coefficients a_0..a_nmax of prod_k (1-u^k)^(-n+)(1+u^k)^(-n-) per row."""
    dtype = _series_dtype(q, nmax)
    N = counts.shape[0]
    S = np.zeros((N, nmax + 1), dtype=dtype)
    S[:, 0] = 1
    for k in range(1, nmax + 1):
        for v, sign in ((1, 1), (2, -1)):
            c = counts[:, k, v].astype(dtype)
            new = S.copy()
            B = np.ones(N, dtype=dtype)
            for j in range(1, nmax // k + 1):
                B = B * (c + (j - 1)) // j  # binom(c+j-1, j), exact
                term = B if sign == 1 or j % 2 == 0 else -B
                new[:, k * j :] += term[:, None] * S[:, : nmax + 1 - k * j]
            S = new
    return S


def coprime_square_counts(counts: np.ndarray, q: int, mmax: int) -> np.ndarray:
    """``out[i, m]`` = #{monic l of degree m : gcd(l, D_i) = 1} for m <= mmax.

    Needs ``counts`` to cover degrees up to mmax."""
    dtype = _series_dtype(q, mmax)
    N = counts.shape[0]
    S = np.zeros((N, mmax + 1), dtype=dtype)
    S[:, 0] = 1
    for k in range(1, mmax + 1):
        c = counts[:, k, 0].astype(dtype)
        new = S.copy()
        B = np.ones(N, dtype=dtype)
        for j in range(1, mmax // k + 1):
            B = B * (c - (j - 1)) // j  # binom(c, j)
            term = B if j % 2 == 0 else -B
            new[:, k * j :] += term[:, None] * S[:, : mmax + 1 - k * j]
        S = new
    # divide by (1 - q u)
    for m in range(1, mmax + 1):
        S[:, m] += q * S[:, m - 1]
    return S


@dataclass
class EnsembleBlock:
    """L-polynomial data for a block of discriminants of degree 2g+1."""

    q: int
    g: int
    dmat: np.ndarray  # (N, 2g+2) coefficient rows
    coeffs: np.ndarray  # (N, nmax+1) a_0..a_nmax
    counts: np.ndarray  # (N, nmax+1, 3) character tallies per degree

    def __len__(self):
        return len(self.dmat)

    @property
    def nmax(self) -> int:
        return self.coeffs.shape[1] - 1


def l_block(q: int, g: int, dmat: np.ndarray, nmax: int | None = None) -> EnsembleBlock:
    nmax = 2 * g if nmax is None else nmax
    counts = character_counts(dmat, q, nmax)
    return EnsembleBlock(q, g, dmat, euler_expand(counts, q, nmax), counts)


def ensemble_slice(q: int, g: int, start: int, stop: int, nmax: int | None = None) -> EnsembleBlock:
    """Square-free discriminants among monic indices ``[start, stop)``."""
    dmat = monic_matrix(q, 2 * g + 1, start, stop)
    dmat = dmat[squarefree_mask(dmat, q)]
    return l_block(q, g, dmat, nmax)


def _slice_job(args):
    return ensemble_slice(*args)


def ensemble_blocks(q: int, g: int, workers: int = 1, nmax: int | None = None) -> list[EnsembleBlock]:
    """The whole ensemble H_{2g+1,q}, split into index-ordered slices.

    The slicing is fixed by ``workers`` but the concatenated rows are the
    same for any worker count.
    """
    total = q ** (2 * g + 1)
    parts = max(1, int(workers))
    bounds = [total * i // parts for i in range(parts + 1)]
    jobs = [(q, g, bounds[i], bounds[i + 1], nmax) for i in range(parts) if bounds[i] < bounds[i + 1]]
    if parts == 1 or len(jobs) == 1:
        return [_slice_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=parts) as pool:
        return list(pool.map(_slice_job, jobs))


def concat_blocks(blocks: list[EnsembleBlock]) -> EnsembleBlock:
    first = blocks[0]
    return EnsembleBlock(
        first.q,
        first.g,
        np.concatenate([b.dmat for b in blocks]),
        np.concatenate([b.coeffs for b in blocks]),
        np.concatenate([b.counts for b in blocks]),
    )


def compute_ensemble(q: int, g: int, workers: int = 1, nmax: int | None = None) -> EnsembleBlock:
    return concat_blocks(ensemble_blocks(q, g, workers, nmax))
