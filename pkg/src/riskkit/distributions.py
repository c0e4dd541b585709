"""Parametric claim-count and claim-size distributions.

Frequency side: the classic discrete families (Poisson, binomial, geometric,
negative binomial, log-series) together with their zero-truncated and
zero-modified variants.  Every frequency family exposes the probability
generating function, the linear pmf-recursion coefficients ``(a, b)`` and a
``thin`` operation, which is what the aggregate-loss engines consume.

Severity side: non-negative continuous families wrapped around
``scipy.stats`` with the insurance-specific services added on top: limited
expected values ``E[min(Z, u)^n]`` and censored moments
``E[min(max(Z - d, 0), c)^n]``, in closed form where a clean one exists and
by adaptive quadrature otherwise.

All objects are immutable after construction; evaluation methods are pure.
Random generation takes an explicit seed or ``numpy.random.Generator``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special, stats

from .errors import MomentError, ParameterError

__all__ = [
    "Poisson",
    "Binomial",
    "Geometric",
    "NegativeBinomial",
    "LogSeries",
    "ZeroTruncated",
    "ZeroModified",
    "Gamma",
    "Lognormal",
    "Exponential",
    "GenPareto",
    "Pareto1",
    "Pareto2",
    "Beta",
    "Burr12",
    "Weibull",
    "Uniform",
    "frequency",
    "severity",
    "FREQUENCY_FAMILIES",
    "SEVERITY_FAMILIES",
]


def _rng(random_state) -> np.random.Generator:
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(random_state)


# ---------------------------------------------------------------------------
# frequency (claim count) families
# ---------------------------------------------------------------------------


class DiscreteDistribution:
    """Base class for claim-count distributions.

    Subclasses provide ``pmf``/``cdf``/``ppf``/``rvs``, the probability
    generating function ``pgf`` (accepting complex arrays, which the FFT
    engine needs), factorial moments, and the recursion coefficients
    ``(a, b)`` valid from ``recursion_start``.
    """

    #: 'ab0' if the pmf recursion holds from k=1, 'ab1' if from k=2.
    recursion_class = "ab0"

    def pmf(self, k):
        raise NotImplementedError

    def cdf(self, k):
        raise NotImplementedError

    def ppf(self, q):
        raise NotImplementedError

    def pgf(self, t):
        raise NotImplementedError

    def ab(self) -> tuple[float, float]:
        """Coefficients of the pmf recursion p_k = (a + b/k) p_{k-1}."""
        raise NotImplementedError

    def factorial_moment(self, k: int) -> float:
        """k-th factorial moment E[N (N-1) ... (N-k+1)]."""
        raise NotImplementedError

    def thin(self, t: float) -> "DiscreteDistribution":
        """Distribution of the count after independent keep-probability t."""
        raise NotImplementedError

    def rvs(self, size: int, random_state=None) -> np.ndarray:
        rng = _rng(random_state)
        u = rng.random(size)
        return self.ppf(u)

    def p0(self) -> float:
        return float(self.pmf(0))

    def p1(self) -> float:
        return float(self.pmf(1))

    # moments derived from factorial moments
    def mean(self) -> float:
        return self.factorial_moment(1)

    def var(self) -> float:
        f1, f2 = self.factorial_moment(1), self.factorial_moment(2)
        return f2 + f1 - f1 * f1

    def std(self) -> float:
        return math.sqrt(self.var())

    def skewness(self) -> float:
        f1 = self.factorial_moment(1)
        f2 = self.factorial_moment(2)
        f3 = self.factorial_moment(3)
        m2 = f2 + f1
        m3 = f3 + 3.0 * f2 + f1
        v = m2 - f1 * f1
        mu3 = m3 - 3.0 * f1 * m2 + 2.0 * f1**3
        return mu3 / v**1.5

    def raw_moment(self, n: int) -> float:
        if n == 1:
            return self.mean()
        if n == 2:
            return self.factorial_moment(2) + self.factorial_moment(1)
        if n == 3:
            return (
                self.factorial_moment(3)
                + 3.0 * self.factorial_moment(2)
                + self.factorial_moment(1)
            )
        raise NotImplementedError(f"raw moment of order {n} not implemented")

    def _check_pgf_domain(self, t):
        # real-argument domain check; complex arguments are engine-internal
        radius = getattr(self, "_pgf_radius", math.inf)
        t_arr = np.asarray(t)
        if not np.iscomplexobj(t_arr) and np.any(np.abs(t_arr) > radius):
            raise ParameterError(
                f"pgf argument outside radius of convergence {radius:.6g}"
            )


class Poisson(DiscreteDistribution):
    """Poisson claim count with mean ``mu``."""

    def __init__(self, mu: float):
        if mu <= 0:
            raise ParameterError(f"poisson requires mu > 0, got {mu}")
        self.mu = float(mu)
        self._dist = stats.poisson(self.mu)

    def pmf(self, k):
        return self._dist.pmf(k)

    def cdf(self, k):
        return self._dist.cdf(k)

    def ppf(self, q):
        return self._dist.ppf(q)

    def rvs(self, size, random_state=None):
        return _rng(random_state).poisson(self.mu, size)

    def pgf(self, t):
        return np.exp(self.mu * (np.asarray(t) - 1.0))

    def ab(self):
        return 0.0, self.mu

    def factorial_moment(self, k):
        return self.mu**k

    def thin(self, t):
        return Poisson(self.mu * t)


class Binomial(DiscreteDistribution):
    """Binomial claim count, ``n`` trials with success probability ``p``."""

    def __init__(self, n: int, p: float):
        if n < 1 or n != int(n):
            raise ParameterError(f"binom requires integer n >= 1, got {n}")
        if not 0.0 < p < 1.0:
            raise ParameterError(f"binom requires 0 < p < 1, got {p}")
        self.n = int(n)
        self.p = float(p)
        self._dist = stats.binom(self.n, self.p)

    def pmf(self, k):
        return self._dist.pmf(k)

    def cdf(self, k):
        return self._dist.cdf(k)

    def ppf(self, q):
        return self._dist.ppf(q)

    def rvs(self, size, random_state=None):
        return _rng(random_state).binomial(self.n, self.p, size)

    def pgf(self, t):
        return (1.0 + self.p * (np.asarray(t) - 1.0)) ** self.n

    def ab(self):
        q = 1.0 - self.p
        return -self.p / q, (self.n + 1) * self.p / q

    def factorial_moment(self, k):
        if k > self.n:
            return 0.0
        return math.prod(self.n - i for i in range(k)) * self.p**k

    def thin(self, t):
        return Binomial(self.n, self.p * t)


class Geometric(DiscreteDistribution):
    """Geometric claim count on {0, 1, ...}: P(N=k) = p (1-p)^k."""

    def __init__(self, p: float):
        if not 0.0 < p < 1.0:
            raise ParameterError(f"geom requires 0 < p < 1, got {p}")
        self.p = float(p)
        self._dist = stats.geom(self.p, loc=-1)  # shift scipy's support to 0
        self._pgf_radius = 1.0 / (1.0 - self.p)

    def pmf(self, k):
        return self._dist.pmf(k)

    def cdf(self, k):
        return self._dist.cdf(k)

    def ppf(self, q):
        return self._dist.ppf(q)

    def pgf(self, t):
        self._check_pgf_domain(t)
        return self.p / (1.0 - (1.0 - self.p) * np.asarray(t))

    def ab(self):
        return 1.0 - self.p, 0.0

    def factorial_moment(self, k):
        q = 1.0 - self.p
        return math.factorial(k) * (q / self.p) ** k

    def thin(self, t):
        return Geometric(self.p / (self.p + (1.0 - self.p) * t))


class NegativeBinomial(DiscreteDistribution):
    """Negative binomial claim count: P(N=k) = C(k+n-1, k) p^n (1-p)^k."""

    def __init__(self, n: float, p: float):
        if n <= 0:
            raise ParameterError(f"nbinom requires n > 0, got {n}")
        if not 0.0 < p < 1.0:
            raise ParameterError(f"nbinom requires 0 < p < 1, got {p}")
        self.n = float(n)
        self.p = float(p)
        self._dist = stats.nbinom(self.n, self.p)
        self._pgf_radius = 1.0 / (1.0 - self.p)

    def pmf(self, k):
        return self._dist.pmf(k)

    def cdf(self, k):
        return self._dist.cdf(k)

    def ppf(self, q):
        return self._dist.ppf(q)

    def rvs(self, size, random_state=None):
        return _rng(random_state).negative_binomial(self.n, self.p, size)

    def pgf(self, t):
        self._check_pgf_domain(t)
        return (self.p / (1.0 - (1.0 - self.p) * np.asarray(t))) ** self.n

    def ab(self):
        q = 1.0 - self.p
        return q, (self.n - 1.0) * q

    def factorial_moment(self, k):
        q = 1.0 - self.p
        return math.prod(self.n + i for i in range(k)) * (q / self.p) ** k

    def thin(self, t):
        return NegativeBinomial(self.n, self.p / (self.p + (1.0 - self.p) * t))


class LogSeries(DiscreteDistribution):
    """Log-series claim count on {1, 2, ...}: P(N=k) = -p^k / (k ln(1-p))."""

    recursion_class = "ab1"

    def __init__(self, p: float):
        if not 0.0 < p < 1.0:
            raise ParameterError(f"logser requires 0 < p < 1, got {p}")
        self.p = float(p)
        self._dist = stats.logser(self.p)
        self._pgf_radius = 1.0 / self.p

    def pmf(self, k):
        return self._dist.pmf(k)

    def cdf(self, k):
        return self._dist.cdf(k)

    def ppf(self, q):
        return self._dist.ppf(q)

    def pgf(self, t):
        self._check_pgf_domain(t)
        return np.log(1.0 - self.p * np.asarray(t)) / math.log(1.0 - self.p)

    def ab(self):
        return self.p, -self.p

    def factorial_moment(self, k):
        c = -1.0 / math.log(1.0 - self.p)
        return c * math.factorial(k - 1) * (self.p / (1.0 - self.p)) ** k

    def thin(self, t):
        keep = 1.0 - self.p * (1.0 - t)
        p_new = self.p * t / keep
        p0m = math.log(keep) / math.log(1.0 - self.p)
        return ZeroModified(LogSeries(p_new), p0m)


class ZeroTruncated(DiscreteDistribution):
    """Zero-truncated variant of a base count family: mass at 0 removed."""

    recursion_class = "ab1"

    def __init__(self, base: DiscreteDistribution):
        self.base = base
        self._p0_base = base.p0()
        if self._p0_base >= 1.0:
            raise ParameterError("base distribution is degenerate at zero")
        self._scale = 1.0 / (1.0 - self._p0_base)
        self._pgf_radius = getattr(base, "_pgf_radius", math.inf)

    def pmf(self, k):
        k = np.asarray(k)
        out = self.base.pmf(k) * self._scale
        return np.where(k == 0, 0.0, out)

    def cdf(self, k):
        k = np.asarray(k, dtype=float)
        out = (self.base.cdf(k) - self._p0_base) * self._scale
        return np.clip(np.where(k < 0, 0.0, out), 0.0, 1.0)

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        return self.base.ppf(self._p0_base + q * (1.0 - self._p0_base))

    def pgf(self, t):
        return (self.base.pgf(t) - self._p0_base) * self._scale

    def ab(self):
        return self.base.ab()

    def factorial_moment(self, k):
        # truncation rescales every k>=1 term of the base pmf
        return self.base.factorial_moment(k) * self._scale

    def thin(self, t):
        p0m_new = float(self.pgf(1.0 - t))
        return ZeroModified(self.base.thin(t), p0m_new)


class ZeroModified(DiscreteDistribution):
    """Zero-modified variant: mass at 0 replaced by ``p0m``."""

    recursion_class = "ab1"

    def __init__(self, base: DiscreteDistribution, p0m: float):
        if not 0.0 <= p0m < 1.0:
            raise ParameterError(f"zero-modified p0M must be in [0, 1), got {p0m}")
        if isinstance(base, ZeroModified):
            base = base.base
        self.base = base
        self.p0m = float(p0m)
        self._p0_base = base.p0()
        if self._p0_base >= 1.0:
            raise ParameterError("base distribution is degenerate at zero")
        self._scale = (1.0 - self.p0m) / (1.0 - self._p0_base)
        self._pgf_radius = getattr(base, "_pgf_radius", math.inf)

    def pmf(self, k):
        k = np.asarray(k)
        out = self.base.pmf(k) * self._scale
        return np.where(k == 0, self.p0m, out)

    def cdf(self, k):
        k = np.asarray(k, dtype=float)
        out = self.p0m + (self.base.cdf(k) - self._p0_base) * self._scale
        return np.clip(np.where(k < 0, 0.0, out), 0.0, 1.0)

    def ppf(self, q):
        q = np.asarray(q, dtype=float)
        inner = self._p0_base + np.clip(q - self.p0m, 0.0, None) / self._scale
        out = self.base.ppf(np.clip(inner, 0.0, 1.0))
        return np.where(q <= self.p0m, 0.0, out)

    def pgf(self, t):
        return self.p0m + (self.base.pgf(t) - self._p0_base) * self._scale

    def ab(self):
        return self.base.ab()

    def factorial_moment(self, k):
        return self.base.factorial_moment(k) * self._scale

    def thin(self, t):
        p0m_new = float(self.pgf(1.0 - t))
        return ZeroModified(self.base.thin(t), p0m_new)


# ---------------------------------------------------------------------------
# severity (claim size) families
# ---------------------------------------------------------------------------


class ContinuousDistribution:
    """Base class for claim-size distributions backed by a frozen scipy law.

    Adds the costing services: ``lev`` (limited expected value) and
    ``censored_moment``.  ``max_finite_moment`` bounds the order of existing
    raw moments; requests beyond it raise :class:`MomentError`.
    """

    #: highest n with E[Z^n] < inf (inf when all moments exist)
    max_finite_moment = math.inf

    def __init__(self, dist):
        self._dist = dist

    def pdf(self, x):
        return self._dist.pdf(x)

    def cdf(self, x):
        return self._dist.cdf(x)

    def sf(self, x):
        return self._dist.sf(x)

    def ppf(self, q):
        return self._dist.ppf(q)

    def rvs(self, size, random_state=None):
        return self._dist.rvs(size=size, random_state=_rng(random_state))

    def support(self) -> tuple[float, float]:
        return self._dist.support()

    def _require_moment(self, n: float):
        if n >= self.max_finite_moment:
            raise MomentError(
                f"{type(self).__name__}: moment of order {n} does not exist "
                f"(finite only below order {self.max_finite_moment:.6g})"
            )

    def mean(self) -> float:
        self._require_moment(1)
        return float(self._dist.mean())

    def var(self) -> float:
        self._require_moment(2)
        return float(self._dist.var())

    def std(self) -> float:
        return math.sqrt(self.var())

    def moment(self, n: int) -> float:
        """Raw moment E[Z^n]."""
        self._require_moment(n)
        return float(self._dist.moment(n))

    def skewness(self) -> float:
        self._require_moment(3)
        return float(self._dist.stats(moments="s"))

    # -- insurance services -------------------------------------------------

    def lev(self, u: float, n: int = 1) -> float:
        """Limited expected value E[min(Z, u)^n]."""
        if n < 1:
            raise ValueError(f"lev order must be >= 1, got {n}")
        if u == math.inf:
            return self.moment(n)
        return self.censored_moment(n, deductible=0.0, cover=u)

    def censored_moment(self, n: int, deductible: float, cover: float) -> float:
        """n-th moment of the per-claim layer transform min(max(Z-d, 0), c)."""
        if n < 1:
            raise ValueError(f"censored moment order must be >= 1, got {n}")
        if deductible < 0 or cover <= 0:
            raise ValueError("censored moment requires d >= 0 and c > 0")
        if cover == math.inf:
            self._require_moment(n)
        closed = self._censored_moment_closed(n, deductible, cover)
        if closed is not None:
            return closed
        return self._censored_moment_quad(n, deductible, cover)

    def _censored_moment_quad(self, n, d, c) -> float:
        # E[L^n] = int_0^c n t^(n-1) S(d + t) dt, valid for any layer
        def integrand(t):
            return n * t ** (n - 1) * self._dist.sf(d + t)

        upper = c if c != math.inf else math.inf
        val, _ = integrate.quad(
            integrand, 0.0, upper, epsabs=1e-12, epsrel=1e-11, limit=200
        )
        return val

    def _censored_moment_closed(self, n, d, c):
        """Closed form via partial raw moments; None when unavailable."""
        partial = getattr(self, "_partial_raw_moment", None)
        if partial is None:
            return None
        # E[L^n] = sum_k C(n,k) (-d)^(n-k) int_d^(d+c) z^k dF + c^n S(d+c)
        top = d + c
        total = 0.0
        for k in range(n + 1):
            mk = partial(k, top) - partial(k, d)
            total += special.comb(n, k, exact=True) * (-d) ** (n - k) * mk
        if c != math.inf:
            total += c**n * float(self._dist.sf(top))
        return total


class Gamma(ContinuousDistribution):
    """Gamma severity with shape ``a``; scipy parameterisation."""

    def __init__(self, a: float, loc: float = 0.0, scale: float = 1.0):
        if a <= 0 or scale <= 0:
            raise ParameterError(f"gamma requires a > 0 and scale > 0, got {a}, {scale}")
        self.a, self.loc, self.scale = float(a), float(loc), float(scale)
        super().__init__(stats.gamma(self.a, loc=self.loc, scale=self.scale))

    def _partial_raw_moment(self, k, u):
        if self.loc != 0.0:
            raise NotImplementedError
        if u == math.inf:
            return self.scale**k * math.exp(
                math.lgamma(self.a + k) - math.lgamma(self.a)
            )
        if u <= 0:
            return 0.0
        return (
            self.scale**k
            * math.exp(math.lgamma(self.a + k) - math.lgamma(self.a))
            * special.gammainc(self.a + k, u / self.scale)
        )

    def _censored_moment_closed(self, n, d, c):
        if self.loc != 0.0:
            return None
        return super()._censored_moment_closed(n, d, c)


class Lognormal(ContinuousDistribution):
    """Lognormal severity: ``shape`` is the log-space std, ``scale`` = exp(log-mean)."""

    def __init__(self, shape: float, scale: float, loc: float = 0.0):
        if shape <= 0 or scale <= 0:
            raise ParameterError(
                f"lognormal requires shape > 0 and scale > 0, got {shape}, {scale}"
            )
        self.shape, self.scale, self.loc = float(shape), float(scale), float(loc)
        super().__init__(stats.lognorm(self.shape, loc=self.loc, scale=self.scale))

    def _partial_raw_moment(self, k, u):
        if self.loc != 0.0:
            raise NotImplementedError
        mu, sig = math.log(self.scale), self.shape
        full = math.exp(k * mu + 0.5 * k * k * sig * sig)
        if u == math.inf:
            return full
        if u <= 0:
            return 0.0
        z = (math.log(u) - mu - k * sig * sig) / sig
        return full * stats.norm.cdf(z)

    def _censored_moment_closed(self, n, d, c):
        if self.loc != 0.0:
            return None
        return super()._censored_moment_closed(n, d, c)


class Exponential(ContinuousDistribution):
    """Exponential severity with hazard ``rate``."""

    def __init__(self, rate: float, loc: float = 0.0):
        if rate <= 0:
            raise ParameterError(f"exponential requires rate > 0, got {rate}")
        self.rate, self.loc = float(rate), float(loc)
        super().__init__(stats.expon(loc=self.loc, scale=1.0 / self.rate))

    def _partial_raw_moment(self, k, u):
        if self.loc != 0.0:
            raise NotImplementedError
        full = math.factorial(k) / self.rate**k
        if u == math.inf:
            return full
        if u <= 0:
            return 0.0
        return full * special.gammainc(k + 1, u * self.rate)

    def _censored_moment_closed(self, n, d, c):
        if self.loc != 0.0:
            return None
        return super()._censored_moment_closed(n, d, c)


class GenPareto(ContinuousDistribution):
    """Generalised Pareto severity; scipy parameterisation (c, loc, scale)."""

    def __init__(self, c: float, loc: float = 0.0, scale: float = 1.0):
        if scale <= 0:
            raise ParameterError(f"genpareto requires scale > 0, got {scale}")
        self.c, self.loc, self.scale = float(c), float(loc), float(scale)
        self.max_finite_moment = math.inf if self.c <= 0 else 1.0 / self.c
        super().__init__(stats.genpareto(self.c, loc=self.loc, scale=self.scale))


class Pareto1(ContinuousDistribution):
    """Single-parameter Pareto on [min, inf): sf(x) = (min / x)^shape."""

    def __init__(self, shape: float, min: float):
        if shape <= 0 or min <= 0:
            raise ParameterError(
                f"pareto1 requires shape > 0 and min > 0, got {shape}, {min}"
            )
        self.shape, self.min = float(shape), float(min)
        self.max_finite_moment = self.shape
        super().__init__(stats.pareto(self.shape, scale=self.min))


class Pareto2(ContinuousDistribution):
    """Two-parameter Pareto (Lomax): sf(x) = (1 + x/scale)^(-shape)."""

    def __init__(self, shape: float, scale: float, loc: float = 0.0):
        if shape <= 0 or scale <= 0:
            raise ParameterError(
                f"pareto2 requires shape > 0 and scale > 0, got {shape}, {scale}"
            )
        self.shape, self.scale, self.loc = float(shape), float(scale), float(loc)
        self.max_finite_moment = self.shape
        super().__init__(stats.lomax(self.shape, loc=self.loc, scale=self.scale))

    def lev(self, u, n=1):
        if n == 1 and self.loc == 0.0 and u != math.inf:
            # E[Z ^ u] has an elementary antiderivative of the survival function
            a, s = self.shape, self.scale
            if a == 1.0:
                return s * math.log1p(u / s)
            return s / (a - 1.0) * (1.0 - (1.0 + u / s) ** (1.0 - a))
        return super().lev(u, n)


class Beta(ContinuousDistribution):
    """Beta severity on [loc, loc + scale]."""

    def __init__(self, a: float, b: float, loc: float = 0.0, scale: float = 1.0):
        if a <= 0 or b <= 0 or scale <= 0:
            raise ParameterError(f"beta requires a, b, scale > 0, got {a}, {b}, {scale}")
        self.a, self.b, self.loc, self.scale = float(a), float(b), float(loc), float(scale)
        super().__init__(stats.beta(self.a, self.b, loc=self.loc, scale=self.scale))


class Burr12(ContinuousDistribution):
    """Burr XII severity: sf(x) = (1 + (x/scale)^c)^(-d)."""

    def __init__(self, c: float, d: float, scale: float = 1.0):
        if c <= 0 or d <= 0 or scale <= 0:
            raise ParameterError(f"burr12 requires c, d, scale > 0, got {c}, {d}, {scale}")
        self.c, self.d, self.scale = float(c), float(d), float(scale)
        self.max_finite_moment = self.c * self.d
        super().__init__(stats.burr12(self.c, self.d, scale=self.scale))


class Weibull(ContinuousDistribution):
    """Weibull severity: sf(x) = exp(-(x/scale)^c)."""

    def __init__(self, c: float, scale: float = 1.0):
        if c <= 0 or scale <= 0:
            raise ParameterError(f"weibull requires c > 0 and scale > 0, got {c}, {scale}")
        self.c, self.scale = float(c), float(scale)
        super().__init__(stats.weibull_min(self.c, scale=self.scale))

    def _partial_raw_moment(self, k, u):
        full = self.scale**k * math.gamma(1.0 + k / self.c)
        if u == math.inf:
            return full
        if u <= 0:
            return 0.0
        return full * special.gammainc(1.0 + k / self.c, (u / self.scale) ** self.c)


class Uniform(ContinuousDistribution):
    """Uniform severity on [a, b]."""

    def __init__(self, a: float = 0.0, b: float = 1.0):
        if b <= a:
            raise ParameterError(f"uniform requires b > a, got a={a}, b={b}")
        self.a, self.b = float(a), float(b)
        super().__init__(stats.uniform(loc=self.a, scale=self.b - self.a))

    def _partial_raw_moment(self, k, u):
        hi = min(u, self.b)
        if hi <= self.a:
            return 0.0
        return (hi ** (k + 1) - self.a ** (k + 1)) / ((k + 1) * (self.b - self.a))


# ---------------------------------------------------------------------------
# name registries (the CLI's dist/par convention)
# ---------------------------------------------------------------------------

_BASE_FREQUENCIES = {
    "poisson": Poisson,
    "binom": Binomial,
    "geom": Geometric,
    "nbinom": NegativeBinomial,
    "logser": LogSeries,
}


def _zt_factory(base_cls):
    def make(**params):
        return ZeroTruncated(base_cls(**params))

    return make


def _zm_factory(base_cls):
    def make(p0M, **params):
        return ZeroModified(base_cls(**params), p0M)

    return make


FREQUENCY_FAMILIES: dict = dict(_BASE_FREQUENCIES)
FREQUENCY_FAMILIES.update(
    {f"zt{name}": _zt_factory(cls) for name, cls in _BASE_FREQUENCIES.items() if name != "logser"}
)
FREQUENCY_FAMILIES.update(
    {f"zm{name}": _zm_factory(cls) for name, cls in _BASE_FREQUENCIES.items()}
)

SEVERITY_FAMILIES = {
    "gamma": Gamma,
    "lognormal": Lognormal,
    "exponential": Exponential,
    "genpareto": GenPareto,
    "pareto1": Pareto1,
    "pareto2": Pareto2,
    "beta": Beta,
    "burr12": Burr12,
    "weibull": Weibull,
    "uniform": Uniform,
}


def frequency(dist: str, par: dict) -> DiscreteDistribution:
    """Build a claim-count distribution from its name and parameter map."""
    try:
        factory = FREQUENCY_FAMILIES[dist]
    except KeyError:
        raise ParameterError(f"unknown frequency family '{dist}'") from None
    try:
        return factory(**par)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for '{dist}': {exc}") from None


def severity(dist: str, par: dict) -> ContinuousDistribution:
    """Build a claim-size distribution from its name and parameter map."""
    try:
        cls = SEVERITY_FAMILIES[dist]
    except KeyError:
        raise ParameterError(f"unknown severity family '{dist}'") from None
    try:
        return cls(**par)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for '{dist}': {exc}") from None
