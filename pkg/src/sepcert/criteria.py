"""Separability decision layer.

The central object is the realignment of a density matrix: for a separable
state it admits a conic decomposition into rank-one partial isometries
``|u><v|`` whose reshaped vectors are positive semidefinite matrices, and
conversely. The SVD provides one candidate decomposition, which yields

* a *sufficient* certificate of separability (all singular pairs reshape
  to PSD matrices; the certificate is an explicit convex combination of
  product states reconstructing the input), and
* a necessary-and-sufficient product-state test (realignment rank one).

Because singular vectors are forced to be orthonormal while the conic
decomposition is not, the sufficient test can fail on separable states;
it therefore never declares entanglement. Entanglement witnesses come
from the two independent necessary criteria implemented alongside: the
positive-partial-transpose test and the trace norm of the realignment
(which cannot exceed 1 on separable states).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOLERANCES, PsdCheck, Tolerances, is_psd, kron, mat, partial_transpose, svd
from .multipartite import permute_subsystems, regroup, tilde_k
from .states import DensityMatrix
from .tilde import DEFAULT_CONVENTION, tilde


class InternalConsistencyError(RuntimeError):
    """A sufficient certificate co-occurred with a failed necessary criterion.

    This signals a bug in the decision layer, never a property of the
    analyzed state.
    """


class Status(enum.Enum):
    CERTIFIED_SEPARABLE = "CertifiedSeparable"
    ENTANGLED = "EntangledBy"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Witness:
    """Name and value of a violated necessary criterion."""

    criterion: str
    value: float


@dataclass(frozen=True, eq=False)
class ConicTerm:
    """One ``weight * |left><right|`` term with PSD reports for both mats."""

    weight: float
    left: np.ndarray
    right: np.ndarray
    left_check: PsdCheck
    right_check: PsdCheck

    @property
    def all_psd(self) -> bool:
        return self.left_check.passed and self.right_check.passed


@dataclass(frozen=True, eq=False)
class ConicDecomposition:
    """SVD-derived conic decomposition of a realigned density matrix."""

    convention: int
    shape: tuple[int, int]
    terms: list[ConicTerm]
    singular_values: np.ndarray

    @property
    def all_psd(self) -> bool:
        return all(term.all_psd for term in self.terms)


@dataclass(frozen=True, eq=False)
class SeparabilityCertificate:
    """Explicit convex combination of product states reconstructing rho."""

    convention: int
    terms: list[tuple[float, np.ndarray, np.ndarray]]

    def reconstruct(self) -> np.ndarray:
        return sum(w * kron(a, b) for w, a, b in self.terms)


@dataclass(frozen=True, eq=False)
class ProductCheck:
    """Outcome of a product-state test."""

    accepted: bool
    factors: list[np.ndarray] | None
    reason: str | None
    ranks: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CutReport:
    """Per-leg realignment report used by the full-separability test."""

    k: int
    passed: bool
    terms: list[ConicTerm]
    singular_values: np.ndarray


@dataclass(frozen=True, eq=False)
class FullSeparabilityResult:
    status: Status
    cuts: list[CutReport]


@dataclass(frozen=True)
class PptResult:
    """Positive-partial-transpose test result.

    ``decisive`` is True for 2x2 and 2x3 systems, where passing implies
    separability; a failure witnesses entanglement in any dimension.
    """

    passes: bool
    min_eigenvalue: float
    decisive: bool


@dataclass(frozen=True)
class RealignmentResult:
    """Trace norm of the realigned state against the separability bound 1."""

    passes: bool
    kyfan_sum: float


@dataclass(frozen=True, eq=False)
class SeparabilityVerdict:
    status: Status
    certificate: object | None = None
    witness: Witness | None = None
    decomposition: ConicDecomposition | None = None
    cuts: list[CutReport] = field(default_factory=list)
    necessary: dict[str, object] = field(default_factory=dict)


# Factor extraction per realignment variant: for each side, where the
# factor comes from (left or right singular vector) and which twiddle maps
# the reshaped vector onto the factor. Derived from the tensor-product
# identities listed in the tilde module.
_FACTOR_RULES: dict[int, tuple[tuple[str, str], tuple[str, str]]] = {
    1: (("left", "none"), ("right", "conj")),
    2: (("left", "conj"), ("right", "none")),
    3: (("left", "none"), ("right", "adjoint")),
    4: (("left", "adjoint"), ("right", "none")),
    5: (("right", "none"), ("left", "conj")),
    6: (("right", "conj"), ("left", "none")),
    7: (("right", "none"), ("left", "adjoint")),
    8: (("right", "adjoint"), ("left", "none")),
}

_PHASE_TRACE_FLOOR = 1e-9
_PHASE_TIE_WINDOW = 1e-6


def _mat_square(vector: np.ndarray) -> np.ndarray:
    d = math.isqrt(vector.size)
    return mat(vector, d, d)


def _canonical_phase(vector: np.ndarray) -> complex:
    """Common phase making the reshaped vector's trace real non-negative.

    Falls back to the first (near-)largest-magnitude entry when the trace
    is numerically zero, as for traceless reshaped vectors.
    """
    d = math.isqrt(vector.size)
    trace = vector[:: d + 1].sum() if d * d == vector.size else vector.sum()
    if abs(trace) > _PHASE_TRACE_FLOOR:
        return np.exp(-1j * np.angle(trace))
    mags = np.abs(vector)
    k = int(np.argmax(mags >= (1.0 - _PHASE_TIE_WINDOW) * mags.max()))
    return np.exp(-1j * np.angle(vector[k]))


def _twiddle(matrix: np.ndarray, kind: str) -> np.ndarray:
    if kind == "none":
        return matrix
    if kind == "conj":
        return matrix.conj()
    return matrix.conj().T


def _factor_pair(
    left: np.ndarray, right: np.ndarray, convention: int
) -> tuple[np.ndarray, np.ndarray]:
    """Map one singular pair to (first_factor, second_factor) matrices."""
    vectors = {"left": left, "right": right}
    (src1, tw1), (src2, tw2) = _FACTOR_RULES[convention]
    first = _twiddle(_mat_square(vectors[src1]), tw1)
    second = _twiddle(_mat_square(vectors[src2]), tw2)
    return first, second


def _checked_terms(realigned: np.ndarray, tol: Tolerances) -> tuple[list[ConicTerm], np.ndarray]:
    result = svd(realigned, tol)
    terms = []
    for i in range(result.numerical_rank):
        u = result.left_vectors[:, i].copy()
        v = result.right_vectors[:, i].copy()
        phase = _canonical_phase(u)
        u *= phase
        v *= phase
        terms.append(
            ConicTerm(
                weight=float(result.singular_values[i]),
                left=u,
                right=v,
                left_check=is_psd(_mat_square(u), tol),
                right_check=is_psd(_mat_square(v), tol),
            )
        )
    return terms, result.singular_values


def svd_conic_decomposition(
    rho: DensityMatrix,
    convention: int = DEFAULT_CONVENTION,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ConicDecomposition:
    """Decompose the realigned state into its singular triplets.

    Each triplet above the rank threshold is phase-canonicalized (the
    common phase of a singular pair is a gauge freedom) and both reshaped
    vectors are tested for positive semidefiniteness.
    """
    shape = rho.bipartite_shape()
    terms, singular_values = _checked_terms(tilde(rho.matrix, shape, convention), tol)
    return ConicDecomposition(
        convention=convention,
        shape=shape,
        terms=terms,
        singular_values=singular_values,
    )


def _certificate_from(decomposition: ConicDecomposition) -> SeparabilityCertificate:
    terms = []
    for term in decomposition.terms:
        first, second = _factor_pair(term.left, term.right, decomposition.convention)
        t1 = float(np.trace(first).real)
        t2 = float(np.trace(second).real)
        terms.append((term.weight * t1 * t2, first / t1, second / t2))
    return SeparabilityCertificate(convention=decomposition.convention, terms=terms)


def certify_separable_bipartite(
    rho: DensityMatrix,
    convention: int = DEFAULT_CONVENTION,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SeparabilityVerdict:
    """Sufficient separability test via the realignment's SVD.

    Returns a certificate (an explicit convex combination of product
    states) when every singular pair reshapes to PSD matrices. A failed
    pair only makes the test inconclusive; this criterion never declares
    entanglement.
    """
    decomposition = svd_conic_decomposition(rho, convention, tol)
    if decomposition.all_psd:
        return SeparabilityVerdict(
            status=Status.CERTIFIED_SEPARABLE,
            certificate=_certificate_from(decomposition),
            decomposition=decomposition,
        )
    return SeparabilityVerdict(status=Status.INCONCLUSIVE, decomposition=decomposition)


def _numerical_rank_of(matrix: np.ndarray, tol: Tolerances) -> int:
    return svd(matrix, tol).numerical_rank


def check_product_bipartite(
    rho: DensityMatrix,
    convention: int = DEFAULT_CONVENTION,
    tol: Tolerances = DEFAULT_TOLERANCES,
    pure_mode: bool = False,
) -> ProductCheck:
    """Decide whether rho is a single tensor product of two states.

    Accepts iff the realignment has numerical rank one and the unique
    singular pair reshapes to PSD matrices (additionally rank-one ones in
    ``pure_mode``). On acceptance the unit-trace factors are returned and
    verified to reconstruct rho.

    :raises ValueError: in ``pure_mode`` when rho is not rank one.
    """
    shape = rho.bipartite_shape()
    if pure_mode and _numerical_rank_of(rho.matrix, tol) != 1:
        raise ValueError("pure_mode requires a rank-one density matrix")
    decomposition = svd_conic_decomposition(rho, convention, tol)
    rank = len(decomposition.terms)
    if rank != 1:
        return ProductCheck(
            accepted=False,
            factors=None,
            reason=f"realignment has numerical rank {rank}, a product state requires 1",
            ranks=(rank,),
        )
    term = decomposition.terms[0]
    if not term.all_psd:
        side = "left" if not term.left_check.passed else "right"
        check = term.left_check if side == "left" else term.right_check
        return ProductCheck(
            accepted=False,
            factors=None,
            reason=(
                f"reshaped {side} singular vector is not PSD "
                f"(min eigenvalue {check.min_eigenvalue:.3e})"
            ),
            ranks=(1,),
        )
    first, second = _factor_pair(term.left, term.right, convention)
    first = first / np.trace(first).real
    second = second / np.trace(second).real
    if pure_mode:
        for name, factor in (("first", first), ("second", second)):
            if _numerical_rank_of(factor, tol) != 1:
                return ProductCheck(
                    accepted=False,
                    factors=None,
                    reason=f"{name} factor is not rank one, so the state is not pure product",
                    ranks=(1,),
                )
    residual = float(np.abs(kron(first, second) - rho.matrix).max())
    if residual > tol.reconstruction_tol:
        return ProductCheck(
            accepted=False,
            factors=None,
            reason=f"factor reconstruction residual {residual:.3e} exceeds tolerance",
            ranks=(1,),
        )
    return ProductCheck(accepted=True, factors=[first, second], reason=None, ranks=(1,))


def is_extremal_form(
    v: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES
) -> np.ndarray | None:
    """Recover x with ``v = conj(x) (x) x`` when v has that form.

    Equivalently, the reshaped vector must be a rank-one PSD matrix
    ``x x^dag``. Returns x normalized with its first nonzero entry real
    positive, or None when no such x exists within tolerance.

    :raises ValueError: if the vector length is not a perfect square.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    d = math.isqrt(v.size)
    if d * d != v.size:
        raise ValueError(f"vector length {v.size} is not a perfect square")
    phase = _canonical_phase(v)
    m = _mat_square(phase * v)
    if not is_psd(m, tol):
        return None
    eigenvalues, eigenvectors = np.linalg.eigh((m + m.conj().T) / 2.0)
    top = float(eigenvalues[-1])
    if top <= 0 or (d > 1 and eigenvalues[-2] > tol.rank_tol * top):
        return None
    x = np.sqrt(top) * eigenvectors[:, -1]
    nonzero = np.flatnonzero(np.abs(x) > 1e-12 * np.abs(x).max())
    x = x * np.exp(-1j * np.angle(x[nonzero[0]]))
    if float(np.linalg.norm(v - np.kron(x.conj(), x))) > tol.reconstruction_tol:
        return None
    return x


def _cut_report(rho: DensityMatrix, k: int, tol: Tolerances) -> CutReport:
    terms, singular_values = _checked_terms(tilde_k(rho.matrix, rho.dims, k), tol)
    return CutReport(
        k=k,
        passed=all(t.all_psd for t in terms),
        terms=terms,
        singular_values=singular_values,
    )


def certify_fully_separable(
    rho: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES
) -> FullSeparabilityResult:
    """Sufficient full-separability test: per-leg realignment SVDs.

    For every leg k, all singular pairs of the k-th realignment must
    reshape to PSD matrices (an n_k x n_k one and one on the remaining
    composite). Any failing leg makes the aggregate inconclusive.
    """
    if rho.num_factors < 2:
        raise ValueError("full-separability analysis needs at least 2 factors")
    cuts = [_cut_report(rho, k, tol) for k in range(1, rho.num_factors + 1)]
    status = Status.CERTIFIED_SEPARABLE if all(c.passed for c in cuts) else Status.INCONCLUSIVE
    return FullSeparabilityResult(status=status, cuts=cuts)


def check_product_multipartite(
    rho: DensityMatrix,
    tol: Tolerances = DEFAULT_TOLERANCES,
    pure_mode: bool = False,
) -> ProductCheck:
    """Decide whether rho is a full tensor product across all legs.

    Accepts iff every per-leg realignment has numerical rank one with PSD
    reshaped singular pairs (rank-one ones in ``pure_mode``). Factors are
    taken from each leg's own left singular vector and cross-checked by
    reconstructing rho globally.
    """
    m = rho.num_factors
    if pure_mode and _numerical_rank_of(rho.matrix, tol) != 1:
        raise ValueError("pure_mode requires a rank-one density matrix")
    ranks = []
    factors: list[np.ndarray] = []
    failure: str | None = None
    for k in range(1, m + 1):
        realigned = tilde_k(rho.matrix, rho.dims, k)
        result = svd(realigned, tol)
        ranks.append(result.numerical_rank)
        if result.numerical_rank != 1:
            failure = failure or (
                f"realignment around leg {k} has numerical rank "
                f"{result.numerical_rank}, a product state requires 1"
            )
            continue
        u = result.left_vectors[:, 0].copy()
        v = result.right_vectors[:, 0].copy()
        phase = _canonical_phase(u)
        u *= phase
        v *= phase
        left_m = _mat_square(u)
        right_m = _mat_square(v)
        if not (is_psd(left_m, tol) and is_psd(right_m, tol)):
            failure = failure or f"reshaped singular pair at leg {k} is not PSD"
            continue
        if pure_mode and (
            _numerical_rank_of(left_m, tol) != 1 or _numerical_rank_of(right_m, tol) != 1
        ):
            failure = failure or f"singular pair at leg {k} is not rank one"
            continue
        factors.append(left_m / np.trace(left_m).real)
    ranks_tuple = tuple(ranks)
    if failure is not None:
        return ProductCheck(accepted=False, factors=None, reason=failure, ranks=ranks_tuple)
    product = factors[0]
    for factor in factors[1:]:
        product = kron(product, factor)
    residual = float(np.abs(product - rho.matrix).max())
    if residual > tol.reconstruction_tol:
        return ProductCheck(
            accepted=False,
            factors=None,
            reason=f"global factor reconstruction residual {residual:.3e} exceeds tolerance",
            ranks=ranks_tuple,
        )
    return ProductCheck(accepted=True, factors=factors, reason=None, ranks=ranks_tuple)


def ppt_criterion(
    rho: DensityMatrix, tol: Tolerances = DEFAULT_TOLERANCES
) -> PptResult:
    """Positive partial transpose test on a two-factor state.

    A failure witnesses entanglement. For 2x2 and 2x3 systems the
    criterion is also sufficient, so passing there certifies separability
    (``decisive``).
    """
    shape = rho.bipartite_shape()
    check = is_psd(partial_transpose(rho.matrix, shape, 2), tol)
    return PptResult(
        passes=check.passed,
        min_eigenvalue=check.min_eigenvalue,
        decisive=sorted(shape) in ([2, 2], [2, 3]),
    )


def realignment_criterion(
    rho: DensityMatrix,
    convention: int = DEFAULT_CONVENTION,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> RealignmentResult:
    """Trace-norm realignment test: separable states stay at or below 1."""
    shape = rho.bipartite_shape()
    values = svd(tilde(rho.matrix, shape, convention), tol).singular_values
    total = float(values.sum())
    return RealignmentResult(passes=total <= 1.0 + tol.rank_tol, kyfan_sum=total)


def _bipartite_cuts(rho: DensityMatrix) -> list[tuple[int, DensityMatrix]]:
    """Each leg against the rest, regrouped to a bipartite state."""
    m = rho.num_factors
    cuts = []
    for k in range(1, m + 1):
        order = [k] + [p for p in range(1, m + 1) if p != k]
        moved = permute_subsystems(rho, order)
        cuts.append((k, regroup(moved, [(1,), tuple(range(2, m + 1))])))
    return cuts


def analyze(
    rho: DensityMatrix,
    convention: int = DEFAULT_CONVENTION,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> SeparabilityVerdict:
    """Run the necessary criteria and the sufficient certificate together.

    Any violated necessary criterion yields an entanglement verdict with
    that witness; a fully PSD conic decomposition yields a separability
    certificate; otherwise the analysis is inconclusive. A certificate
    co-occurring with a violated necessary criterion raises
    :class:`InternalConsistencyError`, since that combination can only
    arise from a bug.
    """
    witnesses: list[Witness] = []
    necessary: dict[str, object] = {}
    if rho.num_factors == 2:
        realign = realignment_criterion(rho, convention, tol)
        ppt = ppt_criterion(rho, tol)
        necessary["realignment"] = realign
        necessary["ppt"] = ppt
        if not realign.passes:
            witnesses.append(Witness("realignment", realign.kyfan_sum))
        if not ppt.passes:
            witnesses.append(Witness("ppt", ppt.min_eigenvalue))
        sufficient = certify_separable_bipartite(rho, convention, tol)
        certificate = sufficient.certificate
        decomposition = sufficient.decomposition
        cuts: list[CutReport] = []
    else:
        for k, cut_state in _bipartite_cuts(rho):
            realign = realignment_criterion(cut_state, convention, tol)
            ppt = ppt_criterion(cut_state, tol)
            necessary[f"realignment(cut {k})"] = realign
            necessary[f"ppt(cut {k})"] = ppt
            if not realign.passes:
                witnesses.append(Witness(f"realignment(cut {k})", realign.kyfan_sum))
            if not ppt.passes:
                witnesses.append(Witness(f"ppt(cut {k})", ppt.min_eigenvalue))
        full = certify_fully_separable(rho, tol)
        certificate = full if full.status is Status.CERTIFIED_SEPARABLE else None
        decomposition = None
        cuts = full.cuts
    if certificate is not None and witnesses:
        raise InternalConsistencyError(
            "sufficient certificate found although necessary criteria failed: "
            + ", ".join(f"{w.criterion}={w.value:.6g}" for w in witnesses)
        )
    if witnesses:
        status = Status.ENTANGLED
    elif certificate is not None:
        status = Status.CERTIFIED_SEPARABLE
    else:
        status = Status.INCONCLUSIVE
    return SeparabilityVerdict(
        status=status,
        certificate=certificate,
        witness=witnesses[0] if witnesses else None,
        decomposition=decomposition,
        cuts=cuts,
        necessary=necessary,
    )
