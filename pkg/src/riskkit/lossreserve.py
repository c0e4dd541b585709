"""Run-off triangles and claims reserving.

Deterministic route: the average-cost method that projects future paid
counts from open claims, settlement-rate factors (alpha) and settlement
speeds, and future average costs from the latest diagonal inflated along
calendar periods.  Stochastic route: each future cell is a compound
mixed Poisson-gamma law whose first-order inputs are the deterministic
projections; two gamma structure variables with unit mean (one on counts,
one on severities) inject estimation uncertainty shared across cells, and
the reserve distribution is simulated.

Triangles live on the index set {(i, j): i + j <= J}.  CSV exchange uses
the long format ``i,j,value``; cells below the diagonal must be absent,
not zero.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distributions import _rng
from .errors import DataError, ParameterError

__all__ = [
    "TriangleSet",
    "ReservingSpec",
    "FisherLangeResult",
    "CrmResult",
    "fisher_lange",
    "crm_reserve",
    "reserve_report",
    "read_triangle_csv",
    "write_triangle_csv",
    "load_bundled_triangles",
]

_DATA_DIR = Path(__file__).parent / "data"


def _observed_mask(J: int) -> np.ndarray:
    i, j = np.indices((J + 1, J + 1))
    return i + j <= J


def _check_triangle(name: str, tri: np.ndarray, J: int, nonneg: bool) -> np.ndarray:
    tri = np.asarray(tri, dtype=float)
    if tri.shape != (J + 1, J + 1):
        raise DataError(f"{name}: expected shape {(J + 1, J + 1)}, got {tri.shape}")
    mask = _observed_mask(J)
    if np.isnan(tri[mask]).any():
        cell = tuple(np.argwhere(np.isnan(tri) & mask)[0])
        raise DataError(f"{name}: missing value in observed cell {cell}")
    if nonneg and (tri[mask] < 0).any():
        cell = tuple(np.argwhere((tri < 0) & mask)[0])
        raise DataError(f"{name}: negative value in cell {cell}")
    out = tri.copy()
    out[~mask] = np.nan
    return out


@dataclass(frozen=True)
class TriangleSet:
    """The five run-off triangles on a shared horizon J.

    ``incremental_payments`` (paid amounts), ``payments_number`` (paid
    counts), ``cased_payments`` (case reserves), ``open_claims_number`` and
    ``reported_claims`` (a vector by accident period, or a triangle that is
    summed over its observed development cells).
    """

    incremental_payments: np.ndarray
    payments_number: np.ndarray
    cased_payments: np.ndarray
    open_claims_number: np.ndarray
    reported_claims: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.incremental_payments).shape[0] - 1
        if J < 1:
            raise DataError("triangles need at least two accident periods")
        object.__setattr__(
            self, "incremental_payments",
            _check_triangle("incremental_payments", self.incremental_payments, J, False),
        )
        object.__setattr__(
            self, "payments_number",
            _check_triangle("payments_number", self.payments_number, J, True),
        )
        object.__setattr__(
            self, "cased_payments",
            _check_triangle("cased_payments", self.cased_payments, J, False),
        )
        object.__setattr__(
            self, "open_claims_number",
            _check_triangle("open_claims_number", self.open_claims_number, J, True),
        )
        rep = np.asarray(self.reported_claims, dtype=float)
        if rep.ndim == 2:
            rep = _check_triangle("reported_claims", rep, J, True)
            rep = np.nansum(rep, axis=1)
        if rep.shape != (J + 1,):
            raise DataError(
                f"reported_claims: expected {J + 1} accident periods, got {rep.shape}"
            )
        if (rep <= 0).any():
            raise DataError("reported_claims must be positive for every accident period")
        object.__setattr__(self, "reported_claims", rep)

    @property
    def J(self) -> int:
        return self.incremental_payments.shape[0] - 1

    def average_cost(self) -> np.ndarray:
        """Observed average claim cost; zero where no payments occurred."""
        n = self.payments_number
        with np.errstate(invalid="ignore", divide="ignore"):
            m = np.where(n > 0, self.incremental_payments / n, 0.0)
        mask = _observed_mask(self.J)
        m[~mask] = np.nan
        return m


@dataclass(frozen=True)
class ReservingSpec:
    """Method selection and parametric assumptions.

    ``claims_inflation`` holds multiplicative calendar-period factors (1 =
    no inflation), scalar or one per future calendar period.  ``czj`` holds
    the severity coefficient of variation per development period.
    """

    reserving_method: str = "fisher_lange"
    claims_inflation: float | np.ndarray = 1.0
    tail: bool = False
    mixing_fq_par: float = 0.01
    mixing_sev_par: float = 0.01
    czj: float | np.ndarray = 0.0

    def __post_init__(self):
        if self.reserving_method not in ("fisher_lange", "crm"):
            raise ParameterError(
                f"unknown reserving method '{self.reserving_method}'"
            )
        infl = np.atleast_1d(np.asarray(self.claims_inflation, dtype=float))
        if (infl <= 0).any():
            raise ParameterError("claims_inflation factors must be positive")
        object.__setattr__(self, "claims_inflation", infl)
        czj = np.atleast_1d(np.asarray(self.czj, dtype=float))
        if (czj < 0).any():
            raise ParameterError("czj must be non-negative")
        object.__setattr__(self, "czj", czj)
        if self.reserving_method == "crm":
            if self.mixing_fq_par <= 0 or self.mixing_sev_par <= 0:
                raise ParameterError("mixing variances must be positive for crm")


def _broadcast(vec: np.ndarray, n: int, what: str) -> np.ndarray:
    if len(vec) == 1:
        return np.full(n, vec[0])
    if len(vec) < n:
        raise ParameterError(f"{what}: need {n} values, got {len(vec)}")
    return vec[:n]


@dataclass(frozen=True)
class FisherLangeResult:
    alpha: np.ndarray  # settlement-rate factors by development period
    settlement_speed: np.ndarray  # v_j^(i), rows are accident periods
    average_cost_projection: np.ndarray  # full square of m / m-hat
    payments_projection: np.ndarray  # n-hat on future cells, 0 elsewhere
    reserve_by_period: np.ndarray
    warnings: tuple = field(default_factory=tuple)

    @property
    def reserve(self) -> float:
        return float(self.reserve_by_period.sum())


def fisher_lange(tri: TriangleSet, spec: ReservingSpec) -> FisherLangeResult:
    """Deterministic average-cost reserve.

    Future cells are filled with ``m_hat * n_hat``: the latest-diagonal
    average cost inflated along calendar periods, and the projected count
    from the diagonal open claims, the alpha factors and the settlement
    speed (the latest accident period's speed, renormalised over each
    older period's remaining development span).
    """
    J = tri.J
    tail = 1 if spec.tail else 0
    n_obs = tri.payments_number
    o = tri.open_claims_number
    d = tri.reported_claims
    m_obs = tri.average_cost()
    warnings: list[str] = []
    if np.nanmin(tri.incremental_payments) < 0:
        warnings.append("negative incremental payments observed")

    # alpha_j = average over accident periods of the open-claims ratio
    alpha = np.ones(J + 1 + tail)
    for j in range(J):
        taus = []
        for i in range(J - j):
            denom = o[i, j]
            if denom <= 0:
                raise DataError(
                    f"open_claims_number is zero at cell ({i}, {j}); "
                    f"settlement-rate factor undefined"
                )
            taus.append((n_obs[i, j + 1 : J - i + 1].sum() + o[i, J - i]) / denom)
        alpha[j] = float(np.mean(taus))
    if spec.tail:
        alpha[J] = alpha[J - 1]  # extrapolated: apply the last factor

    # settlement speed of the latest accident period, by reported-claims mix
    width = J + tail
    raw = np.zeros(width)
    for j in range(1, J + 1):
        raw[j - 1] = n_obs[J - j, j] * d[J] / d[J - j]
    if spec.tail:
        raw[J] = raw[J - 1]  # repeat the last observed speed for the tail column
    if raw.sum() <= 0:
        raise DataError("settlement speed undefined: no off-diagonal payment counts")
    v_latest = raw / raw.sum()

    # renormalise the speed over each accident period's future span
    speed = np.zeros((J + 1, width))
    for i in range(1, J + 1):
        future = v_latest[J - i :]
        speed[i, J - i :] = future / future.sum()
    if spec.tail:
        speed[0, J] = 1.0  # only the tail column is open for the oldest period

    # future average costs: latest diagonal inflated along calendar periods
    infl = _broadcast(np.asarray(spec.claims_inflation), J + tail, "claims_inflation")
    m_full = np.zeros((J + 1, J + 1 + tail))
    m_full[:, : J + 1] = np.where(np.isnan(m_obs), 0.0, m_obs)
    n_hat = np.zeros((J + 1, J + 1 + tail))
    reserve_by_period = np.zeros(J + 1)
    start_i = 0 if spec.tail else 1
    for i in range(start_i, J + 1):
        for j in range(J - i + 1, J + 1 + tail):
            base = m_obs[J - j, j] if j <= J else m_obs[0, J]
            m_ij = base * float(np.prod(infl[: i + j - J]))  # calendar J+1 .. i+j
            n_ij = o[i, J - i] * alpha[J - i] * _speed_at(speed, i, j)
            m_full[i, j] = m_ij
            n_hat[i, j] = n_ij
            reserve_by_period[i] += m_ij * n_ij

    return FisherLangeResult(
        alpha=alpha,
        settlement_speed=speed,
        average_cost_projection=m_full,
        payments_projection=n_hat,
        reserve_by_period=reserve_by_period,
        warnings=tuple(warnings),
    )


def _speed_at(speed: np.ndarray, i: int, j: int) -> float:
    # speed columns are indexed by development period j = 1 .. J (+ tail)
    return float(speed[i, j - 1])


@dataclass(frozen=True)
class CrmResult:
    """Simulated collective-risk reserve."""

    reserve_sample: np.ndarray  # sorted total reserves across simulations
    by_period_mean: np.ndarray
    by_period_std: np.ndarray
    fl: FisherLangeResult

    @property
    def reserve(self) -> float:
        return float(self.reserve_sample.mean())

    @property
    def std(self) -> float:
        return float(self.reserve_sample.std(ddof=1))

    @property
    def coeff_variation(self) -> float:
        return self.std / self.reserve

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        if np.any((q <= 0) | (q >= 1)):
            raise ParameterError("quantile levels must lie in (0, 1)")
        idx = np.clip(np.ceil(q * len(self.reserve_sample)).astype(int) - 1, 0, None)
        out = self.reserve_sample[idx]
        return out if out.ndim else float(out)


def crm_reserve(
    tri: TriangleSet,
    spec: ReservingSpec,
    ntr_sim: int = 1000,
    random_state=None,
) -> CrmResult:
    """Simulate the reserve as compound mixed Poisson-gamma cells.

    Per replication: draw the two unit-mean gamma structure variables, then
    for every future cell draw a Poisson count around the projected count
    and a gamma severity sum around the projected average cost with the
    development-period coefficient of variation; the severity structure
    variable scales the cell total.
    """
    if ntr_sim < 2:
        raise ParameterError(f"ntr_sim must be >= 2 for dispersion statistics, got {ntr_sim}")
    fl = fisher_lange(tri, spec)
    J = tri.J
    tail = 1 if spec.tail else 0
    czj = _broadcast(np.asarray(spec.czj), J + 1 + tail, "czj")
    rng = _rng(random_state)

    sq, sp = spec.mixing_fq_par, spec.mixing_sev_par
    q = rng.gamma(1.0 / sq, sq, ntr_sim)
    psi = rng.gamma(1.0 / sp, sp, ntr_sim)

    by_period = np.zeros((ntr_sim, J + 1))
    for i in range(0 if spec.tail else 1, J + 1):
        for j in range(J - i + 1, J + 1 + tail):
            n_ij = fl.payments_projection[i, j]
            m_ij = fl.average_cost_projection[i, j]
            if n_ij <= 0 or m_ij <= 0:
                continue
            counts = rng.poisson(n_ij * q)
            c = czj[j]
            if c > 0:
                shape = counts / (c * c)
                totals = np.zeros(ntr_sim)
                pos = counts > 0
                totals[pos] = rng.gamma(shape[pos], c * c * m_ij)
            else:
                totals = counts * m_ij
            by_period[:, i] += psi * totals

    reserves = by_period.sum(axis=1)
    return CrmResult(
        reserve_sample=np.sort(reserves),
        by_period_mean=by_period.mean(axis=0),
        by_period_std=by_period.std(axis=0, ddof=1),
        fl=fl,
    )


def reserve_report(result: FisherLangeResult | CrmResult) -> str:
    """Per-accident-period table: reserve, simulation dispersion, CoV."""
    is_crm = isinstance(result, CrmResult)
    width = 62
    lines = ["Claims Reserve by Accident Period".center(width), "=" * width]
    if is_crm:
        lines.append(f"{'Period':>8}{'Reserve':>18}{'Dispersion':>18}{'CoV':>10}")
    else:
        lines.append(f"{'Period':>8}{'Reserve':>18}")
    lines.append("=" * width)
    if is_crm:
        for i, (m, s) in enumerate(zip(result.by_period_mean, result.by_period_std)):
            cov = f"{s / m:.2%}" if m > 0 else "-"
            lines.append(f"{i:>8}{m:>18.2f}{s:>18.2f}{cov:>10}")
        lines.append("=" * width)
        lines.append(
            f"{'Total':>8}{result.reserve:>18.2f}{result.std:>18.2f}"
            f"{result.coeff_variation:>10.2%}"
        )
    else:
        for i, r in enumerate(result.reserve_by_period):
            lines.append(f"{i:>8}{r:>18.2f}")
        lines.append("=" * width)
        lines.append(f"{'Total':>8}{result.reserve:>18.2f}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CSV exchange and bundled fixtures
# ---------------------------------------------------------------------------


def read_triangle_csv(path) -> np.ndarray:
    """Read a triangle (or a vector, when j is constant 0) in long format."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["i", "j", "value"]:
            raise DataError(f"{path}: expected header 'i,j,value'")
        for rec in reader:
            rows.append((int(rec["i"]), int(rec["j"]), float(rec["value"])))
    if not rows:
        raise DataError(f"{path}: empty triangle file")
    J = max(max(i, j) for i, j, _ in rows)
    seen = set()
    tri = np.full((J + 1, J + 1), np.nan)
    for i, j, v in rows:
        if i + j > J:
            raise DataError(f"{path}: cell ({i}, {j}) lies below the diagonal")
        if (i, j) in seen:
            raise DataError(f"{path}: duplicate cell ({i}, {j})")
        seen.add((i, j))
        tri[i, j] = v
    return tri


def write_triangle_csv(path, tri: np.ndarray) -> None:
    tri = np.asarray(tri, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["i", "j", "value"])
        if tri.ndim == 1:
            for i, v in enumerate(tri):
                writer.writerow([i, 0, repr(float(v))])
            return
        J = tri.shape[0] - 1
        for i in range(J + 1):
            for j in range(J + 1 - i):
                if not math.isnan(tri[i, j]):
                    writer.writerow([i, j, repr(float(tri[i, j]))])


def load_bundled_triangles() -> tuple[TriangleSet, np.ndarray]:
    """The packaged synthetic triangle fixtures and their czj vector."""
    tri = TriangleSet(
        incremental_payments=read_triangle_csv(_DATA_DIR / "incremental_payments.csv"),
        payments_number=read_triangle_csv(_DATA_DIR / "payments_number.csv"),
        cased_payments=read_triangle_csv(_DATA_DIR / "cased_payments.csv"),
        open_claims_number=read_triangle_csv(_DATA_DIR / "open_claims_number.csv"),
        reported_claims=read_triangle_csv(_DATA_DIR / "reported_claims.csv")[:, 0],
    )
    czj = read_triangle_csv(_DATA_DIR / "czj.csv")[:, 0]
    return tri, czj
