"""Biorthogonal companions to the monomials, with exact recursion.

Given an orthonormal family p_0..p_k spanning V_k, this module constructs
the unique polynomials beta_0..beta_k in V_k with

    <beta_n, x^m> = delta_nm        for all n, m <= k,

entirely in rational arithmetic.  The least-squares projection of f onto
V_k is then simply  P_k f = sum_n <f, beta_n> x^n : the monomial-basis
coefficients of the fit come from inner products alone, with no linear
system ever solved.

Construction (both structural types collapse to one rule): the coefficient
of p_j in beta_n equals the coefficient of x^n in p_j, summed over all
degrees j >= n the family places x^n in - every j for a full-support
family, every other j for a parity-support one.  Three operations then stay closed over exact rationals:

* ``upgrade``  - extend a full set from order k to k+1 by adding one
  multiple of p_{k+1} to each row (parity-support rows of the wrong parity are
  untouched) plus one new row; no previously computed quantity is redone.
* ``downgrade`` - remove one monomial exponent l from the active set via

      beta_n' = beta_n - beta_l * <beta_l, beta_n> / <beta_l, beta_l>,

  which re-biorthogonalises the remaining rows against the remaining
  monomials in place.
* ``project`` - dot each beta row with a moment vector.

The Gram matrix of the betas is maintained alongside: built once via
Parseval (the rows' spectral coefficients), then updated by a rank-one
formula on every downgrade.  For Chebyshev sets all stored rationals carry
the package-wide 1/pi convention, which cancels in every ratio the
recursions use.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Mapping

from .exact import ExactPoly
from .families import FamilySpec, OpsType, norm_sq, rat_coeff

if TYPE_CHECKING:  # pragma: no cover
    from .regress import FitModel, MomentVector


class UpgradeAfterRemovalError(ValueError):
    """Order upgrade is only defined on full (never-downgraded) sets."""


class NotActiveError(KeyError):
    """The requested exponent is not in the active set."""


class LastElementError(ValueError):
    """Refusing to downgrade a set with a single active element."""


@dataclass(frozen=True)
class BiorthSet:
    """Rows beta_n^k for the active exponents n, plus cached Gram data.

    Immutable; ``upgrade`` and ``downgrade`` return new sets.  ``spectral``
    holds the coefficients of each row in the p_j basis and is only present
    on full sets (it is what makes ``upgrade`` incremental); removal drops
    it, after which only further removals and projections are meaningful.
    """

    family: FamilySpec
    k: int
    active: tuple[int, ...]
    betas: Mapping[int, ExactPoly]
    gram: Mapping[tuple[int, int], Fraction]
    spectral: Mapping[int, dict[int, Fraction]] | None = field(default=None)

    @property
    def is_full(self) -> bool:
        return len(self.active) == self.k + 1

    def beta(self, n: int) -> ExactPoly:
        if n not in self.betas:
            raise NotActiveError(n)
        return self.betas[n]

    def gram_entry(self, n: int, m: int) -> Fraction:
        """Exact <beta_n, beta_m> (rational part; /pi implied for Chebyshev)."""
        if n not in self.betas or m not in self.betas:
            raise NotActiveError((n, m))
        if n > m:
            n, m = m, n
        return self.gram.get((n, m), Fraction(0))


def _degree_step(fam: FamilySpec) -> int:
    return 1 if fam.ops_type is OpsType.FULL_SUPPORT else 2


def build(fam: FamilySpec, k: int) -> BiorthSet:
    """Construct the full biorthogonal set of order k from scratch."""
    if k < 0:
        raise ValueError("order k must be nonnegative")
    step = _degree_step(fam)
    # column j of the family's coefficient table, indexed by exponent
    cols = [[rat_coeff(fam, j, e) for e in range(j + 1)] for j in range(k + 1)]
    norms = [norm_sq(fam, j) for j in range(k + 1)]

    spectral: dict[int, dict[int, Fraction]] = {}
    betas: dict[int, ExactPoly] = {}
    for n in range(k + 1):
        spec = {j: cols[j][n] for j in range(n, k + 1, step)}
        spectral[n] = spec
        coeffs = [Fraction(0)] * (k + 1)
        for j, a in spec.items():
            if not a:
                continue
            w = a * norms[j]
            col = cols[j]
            for e in range(n % 2 if step == 2 else 0, j + 1, step):
                if col[e]:
                    coeffs[e] += w * col[e]
        betas[n] = ExactPoly(tuple(coeffs), fam.poly_scale)

    gram: dict[tuple[int, int], Fraction] = {}
    for n in range(k + 1):
        for m in range(n, k + 1, step):
            total = Fraction(0)
            lo = max(n, m)
            for j in range(lo, k + 1, step):
                a, b = spectral[n].get(j), spectral[m].get(j)
                if a and b:
                    total += a * b * norms[j]
            gram[(n, m)] = total
        if step == 2:
            for m in range(n + 1, k + 1, step):
                gram[(n, m)] = Fraction(0)  # opposite parity: no shared p_j
    return BiorthSet(fam, k, tuple(range(k + 1)), betas, gram, spectral)


def upgrade(s: BiorthSet) -> BiorthSet:
    """Extend a full set from order k to order k+1 incrementally.

    Each existing row gains (coefficient of x^n in p_{k+1}) * p_{k+1};
    for parity-support families that coefficient is zero when k+1-n is odd and the
    row passes through unchanged.  The new row n = k+1 is a single multiple
    of p_{k+1}.  Gram entries update by the matching products.
    """
    if not s.is_full or s.spectral is None:
        raise UpgradeAfterRemovalError(
            "cannot upgrade a set after removals; rebuild at the new order")
    fam = s.family
    k1 = s.k + 1
    nrm = norm_sq(fam, k1)
    new_col = [rat_coeff(fam, k1, e) for e in range(k1 + 1)]
    scale = fam.poly_scale

    betas = {}
    spectral = {}
    gram = dict(s.gram)
    adds = {}  # n -> spectral coefficient on p_{k1}
    for n in s.active:
        a = new_col[n]
        adds[n] = a
        spec = dict(s.spectral[n])
        old = list(s.betas[n].coeffs) + [Fraction(0)]
        if a:
            spec[k1] = a
            w = a * nrm
            for e in range(k1 + 1):
                if new_col[e]:
                    old[e] += w * new_col[e]
        spectral[n] = spec
        betas[n] = ExactPoly(tuple(old), scale)
    # the new top row
    a_top = new_col[k1]
    adds[k1] = a_top
    spectral[k1] = {k1: a_top}
    top = [Fraction(0)] * (k1 + 1)
    w = a_top * nrm
    for e in range(k1 + 1):
        if new_col[e]:
            top[e] = w * new_col[e]
    betas[k1] = ExactPoly(tuple(top), scale)

    for n in range(k1 + 1):
        for m in range(n, k1 + 1):
            if adds[n] and adds[m]:
                key = (n, m)
                gram[key] = gram.get(key, Fraction(0)) + adds[n] * adds[m] * nrm
            elif m == k1 and (n, m) not in gram:
                gram[(n, m)] = Fraction(0)
    return BiorthSet(fam, k1, tuple(range(k1 + 1)), betas, gram, spectral)


def downgrade(s: BiorthSet, ell: int) -> BiorthSet:
    """Remove exponent ``ell`` from the active set.

    The remaining rows are corrected by the projection formula so they stay
    biorthogonal to the remaining monomials; the Gram cache gets the
    corresponding rank-one update.  All arithmetic is rational: the 1/pi
    factors (Chebyshev) cancel in the correction ratio.
    """
    if ell not in s.betas:
        raise NotActiveError(ell)
    if len(s.active) == 1:
        raise LastElementError("cannot remove the only active exponent")
    g_ll = s.gram_entry(ell, ell)
    beta_l = s.betas[ell]

    betas = {}
    ratios = {}
    for n in s.active:
        if n == ell:
            continue
        r = s.gram_entry(ell, n) / g_ll
        ratios[n] = r
        if r:
            coeffs = tuple(c - r * cl for c, cl in
                           zip(s.betas[n].coeffs, beta_l.coeffs))
            betas[n] = ExactPoly(coeffs, beta_l.scale)
        else:
            betas[n] = s.betas[n]

    gram = {}
    for (n, m), g in s.gram.items():
        if ell in (n, m):
            continue
        gram[(n, m)] = g - s.gram_entry(ell, n) * s.gram_entry(ell, m) / g_ll
    active = tuple(n for n in s.active if n != ell)
    return BiorthSet(s.family, s.k, active, betas, gram, None)


def project(s: BiorthSet, moments: "MomentVector") -> "FitModel":
    """Least-squares coefficients <f, beta_n> for all active n.

    The dot products run in exact rational arithmetic (float moments are
    promoted to the rationals they already are), so the huge cancellations
    inside high-order beta rows cost no precision; each coefficient is
    rounded to float exactly once.  This is what lets order ~36 fits come
    out clean where a solved normal-equations system loses everything.
    """
    from .regress import FitModel, MomentShortfallError

    mu = moments.exact_values()
    need = max(s.active) + 1
    if len(mu) < need:
        raise MomentShortfallError(
            f"moment vector of length {len(mu)} too short for exponents "
            f"up to {need - 1}")
    exact = []
    for n in s.active:
        c = Fraction(0)
        for i, b in enumerate(s.betas[n].coeffs):
            if b:
                c += b * mu[i]
        exact.append(c)
    return FitModel.from_projection(s, tuple(exact))


def select_removal(s: BiorthSet, moments: "MomentVector") -> int:
    """Exponent whose removal increases the squared fit error least.

    Removing l adds |<f, beta_l>|^2 / ||beta_l||^2 to the squared error,
    so the arg-min of that score is returned; ties break to the smallest
    exponent.  Scores are compared in float (they involve measured
    moments), which is far finer than any tie the data can produce.
    """
    if len(s.active) == 1:
        raise LastElementError("cannot select a removal from a single element")
    model = project(s, moments)
    best_l = None
    best_score = None
    for n, c in zip(s.active, model.coeffs):
        score = c * c / float(s.gram_entry(n, n))
        if best_score is None or score < best_score:
            best_l, best_score = n, score
    return best_l
