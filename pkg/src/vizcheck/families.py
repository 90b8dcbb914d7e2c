"""Outcome distribution families.

Each family defines its location link, log-likelihood (with analytic
derivatives for fitting), analytic mean, support test, and sampler. The
location parameter `mu` always lives on the linear-predictor scale (identity
for normal, log scale for counts, logit scale for probabilities), and
`sigma` is the positive scale parameter where the family has one.
"""

from __future__ import annotations

import numpy as np
from scipy.special import digamma, expit, gammaln

from .errors import DomainError, UnknownVariableError

LN2PI = np.log(2.0 * np.pi)

FAMILY_KINDS = ("normal", "log_normal", "logit_normal", "logistic",
                "poisson", "negative_binomial")

# lam guard for count samplers; exp(eta) overflows long before this
_MAX_RATE = 1e15


def _logit(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x >= 1):
        raise DomainError("logit is undefined outside (0, 1)")
    return np.log(x / (1.0 - x))


def _log(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("log is undefined for non-positive values")
    return np.log(x)


def _normal_ll(z, mu, sigma):
    return -0.5 * LN2PI - np.log(sigma) - 0.5 * ((z - mu) / sigma) ** 2


class Family:
    kind: str
    has_scale: bool
    support: str  # human-readable support description

    # location link: response-scale mean <-> linear predictor
    def link(self, mu_response):
        raise NotImplementedError

    def inverse_link(self, eta):
        raise NotImplementedError

    def loglik(self, y, mu, sigma=None):
        raise NotImplementedError

    def dl_dmu(self, y, mu, sigma=None):
        raise NotImplementedError

    def dl_dlogsigma(self, y, mu, sigma):
        raise NotImplementedError

    def mean(self, mu, sigma=None):
        """Analytic E[y] on the response scale."""
        raise NotImplementedError

    def sample(self, mu, sigma, rng, size=None):
        raise NotImplementedError

    def support_violations(self, y) -> np.ndarray:
        """Indices of outcome values outside the family's support."""
        raise NotImplementedError

    def initial_values(self, y) -> tuple[float, float | None]:
        """Warm start (location intercept, log-scale intercept or None)."""
        raise NotImplementedError


class Normal(Family):
    kind = "normal"
    has_scale = True
    support = "all real numbers"

    def link(self, mu_response):
        return np.asarray(mu_response, dtype=float)

    def inverse_link(self, eta):
        return np.asarray(eta, dtype=float)

    def _z(self, y):
        return np.asarray(y, dtype=float)

    def loglik(self, y, mu, sigma=None):
        return _normal_ll(self._z(y), mu, sigma)

    def dl_dmu(self, y, mu, sigma=None):
        return (self._z(y) - mu) / sigma ** 2

    def dl_dlogsigma(self, y, mu, sigma):
        return ((self._z(y) - mu) / sigma) ** 2 - 1.0

    def mean(self, mu, sigma=None):
        return np.asarray(mu, dtype=float)

    def sample(self, mu, sigma, rng, size=None):
        return rng.normal(mu, sigma, size=size)

    def support_violations(self, y):
        y = np.asarray(y, dtype=float)
        return np.flatnonzero(~np.isfinite(y))

    def initial_values(self, y):
        y = np.asarray(y, dtype=float)
        mu0 = float(np.mean(y))
        sd = float(np.sqrt(np.mean((y - mu0) ** 2)))
        return mu0, float(np.log(max(sd, 1e-3)))


class LogNormal(Normal):
    kind = "log_normal"
    support = "positive values"

    def link(self, mu_response):
        return _log(mu_response)

    def inverse_link(self, eta):
        return np.exp(np.asarray(eta, dtype=float))

    def _z(self, y):
        return np.log(np.asarray(y, dtype=float))

    def loglik(self, y, mu, sigma=None):
        z = self._z(y)
        return _normal_ll(z, mu, sigma) - z

    def mean(self, mu, sigma=None):
        return np.exp(np.asarray(mu, dtype=float) + 0.5 * np.asarray(sigma) ** 2)

    def sample(self, mu, sigma, rng, size=None):
        return np.exp(rng.normal(mu, sigma, size=size))

    def support_violations(self, y):
        y = np.asarray(y, dtype=float)
        return np.flatnonzero(~(np.isfinite(y) & (y > 0)))

    def initial_values(self, y):
        z = self._z(y)
        mu0 = float(np.log(np.mean(np.asarray(y, dtype=float))))
        sd = float(np.sqrt(np.mean((z - mu0) ** 2)))
        return mu0, float(np.log(max(sd, 1e-3)))


_GH_NODES: tuple[np.ndarray, np.ndarray] | None = None


def _gauss_hermite() -> tuple[np.ndarray, np.ndarray]:
    global _GH_NODES
    if _GH_NODES is None:
        _GH_NODES = np.polynomial.hermite.hermgauss(256)
    return _GH_NODES


class LogitNormal(Normal):
    kind = "logit_normal"
    support = "values strictly between 0 and 1"

    def link(self, mu_response):
        return _logit(mu_response)

    def inverse_link(self, eta):
        return expit(np.asarray(eta, dtype=float))

    def _z(self, y):
        y = np.asarray(y, dtype=float)
        return np.log(y / (1.0 - y))

    def loglik(self, y, mu, sigma=None):
        y = np.asarray(y, dtype=float)
        return _normal_ll(self._z(y), mu, sigma) - np.log(y * (1.0 - y))

    def mean(self, mu, sigma=None):
        # no closed form; 256-point Gauss-Hermite on E[expit(mu + sigma Z)]
        nodes, weights = _gauss_hermite()
        mu = np.atleast_1d(np.asarray(mu, dtype=float))
        sigma = np.broadcast_to(np.asarray(sigma, dtype=float), mu.shape)
        grid = mu[:, None] + np.sqrt(2.0) * sigma[:, None] * nodes[None, :]
        vals = expit(grid) @ weights / np.sqrt(np.pi)
        return vals if vals.size > 1 else float(vals[0])

    def sample(self, mu, sigma, rng, size=None):
        return expit(rng.normal(mu, sigma, size=size))

    def support_violations(self, y):
        y = np.asarray(y, dtype=float)
        return np.flatnonzero(~(np.isfinite(y) & (y > 0) & (y < 1)))

    def initial_values(self, y):
        z = self._z(y)
        m = float(np.mean(np.asarray(y, dtype=float)))
        mu0 = float(np.log(m / (1.0 - m)))
        sd = float(np.sqrt(np.mean((z - mu0) ** 2)))
        return mu0, float(np.log(max(sd, 1e-3)))


class Logistic(Family):
    """Bernoulli outcomes on the log-odds scale."""

    kind = "logistic"
    has_scale = False
    support = "0 or 1"

    def link(self, mu_response):
        return _logit(mu_response)

    def inverse_link(self, eta):
        return expit(np.asarray(eta, dtype=float))

    def loglik(self, y, mu, sigma=None):
        y = np.asarray(y, dtype=float)
        mu = np.asarray(mu, dtype=float)
        return y * mu - np.logaddexp(0.0, mu)

    def dl_dmu(self, y, mu, sigma=None):
        return np.asarray(y, dtype=float) - expit(mu)

    def mean(self, mu, sigma=None):
        return expit(np.asarray(mu, dtype=float))

    def sample(self, mu, sigma, rng, size=None):
        p = expit(np.asarray(mu, dtype=float))
        if size is None:
            size = p.shape if p.shape else None
        return (rng.random(size) < p).astype(int)

    def support_violations(self, y):
        y = np.asarray(y, dtype=float)
        return np.flatnonzero(~((y == 0) | (y == 1)))

    def initial_values(self, y):
        m = float(np.mean(np.asarray(y, dtype=float)))
        m = min(max(m, 1e-3), 1.0 - 1e-3)
        return float(np.log(m / (1.0 - m))), None


class Poisson(Family):
    kind = "poisson"
    has_scale = False
    support = "non-negative integers"

    def link(self, mu_response):
        return _log(mu_response)

    def inverse_link(self, eta):
        return np.exp(np.asarray(eta, dtype=float))

    def loglik(self, y, mu, sigma=None):
        y = np.asarray(y, dtype=float)
        mu = np.asarray(mu, dtype=float)
        return y * mu - np.exp(mu) - gammaln(y + 1.0)

    def dl_dmu(self, y, mu, sigma=None):
        return np.asarray(y, dtype=float) - np.exp(np.asarray(mu, dtype=float))

    def mean(self, mu, sigma=None):
        return np.exp(np.asarray(mu, dtype=float))

    def sample(self, mu, sigma, rng, size=None):
        lam = np.minimum(np.exp(np.asarray(mu, dtype=float)), _MAX_RATE)
        return rng.poisson(lam, size=size)

    def support_violations(self, y):
        y = np.asarray(y, dtype=float)
        ok = np.isfinite(y) & (y >= 0) & (y == np.floor(y))
        return np.flatnonzero(~ok)

    def initial_values(self, y):
        m = max(float(np.mean(np.asarray(y, dtype=float))), 1e-3)
        return float(np.log(m)), None


class NegativeBinomial(Family):
    """Mean/dispersion parameterization: lam = exp(mu), theta = 1/sigma^2.

    Variance is lam + lam^2/theta, so sigma -> 0 recovers the Poisson.
    """

    kind = "negative_binomial"
    has_scale = True
    support = "non-negative integers"

    @staticmethod
    def _theta(sigma):
        return 1.0 / np.asarray(sigma, dtype=float) ** 2

    def link(self, mu_response):
        return _log(mu_response)

    def inverse_link(self, eta):
        return np.exp(np.asarray(eta, dtype=float))

    def loglik(self, y, mu, sigma=None):
        y = np.asarray(y, dtype=float)
        mu = np.asarray(mu, dtype=float)
        lam = np.exp(mu)
        theta = self._theta(sigma)
        return (gammaln(y + theta) - gammaln(theta) - gammaln(y + 1.0)
                - theta * np.log1p(lam / theta)
                + y * (mu - np.log(theta + lam)))

    def dl_dmu(self, y, mu, sigma=None):
        y = np.asarray(y, dtype=float)
        lam = np.exp(np.asarray(mu, dtype=float))
        theta = self._theta(sigma)
        return y - lam * (theta + y) / (theta + lam)

    def dl_dlogsigma(self, y, mu, sigma):
        y = np.asarray(y, dtype=float)
        lam = np.exp(np.asarray(mu, dtype=float))
        theta = self._theta(sigma)
        dl_dtheta = (digamma(y + theta) - digamma(theta)
                     + np.log(theta) + 1.0 - np.log(theta + lam)
                     - (theta + y) / (theta + lam))
        return -2.0 * theta * dl_dtheta

    def mean(self, mu, sigma=None):
        return np.exp(np.asarray(mu, dtype=float))

    def sample(self, mu, sigma, rng, size=None):
        lam = np.minimum(np.exp(np.asarray(mu, dtype=float)), _MAX_RATE)
        theta = self._theta(sigma)
        rate = rng.gamma(shape=theta, scale=lam / theta, size=size)
        return rng.poisson(np.minimum(rate, _MAX_RATE))

    def support_violations(self, y):
        y = np.asarray(y, dtype=float)
        ok = np.isfinite(y) & (y >= 0) & (y == np.floor(y))
        return np.flatnonzero(~ok)

    def initial_values(self, y):
        y = np.asarray(y, dtype=float)
        m = max(float(np.mean(y)), 1e-3)
        s2 = float(np.var(y))
        # method-of-moments dispersion: var = m + m^2 sigma^2
        sigma0 = np.sqrt(max(s2 - m, 1e-6)) / m
        sigma0 = min(max(sigma0, 0.05), 20.0)
        return float(np.log(m)), float(np.log(sigma0))


_FAMILIES: dict[str, Family] = {
    f.kind: f for f in (Normal(), LogNormal(), LogitNormal(), Logistic(),
                        Poisson(), NegativeBinomial())
}


def get_family(kind: str) -> Family:
    try:
        return _FAMILIES[kind]
    except KeyError:
        raise UnknownVariableError(
            f"unknown family '{kind}'; expected one of {', '.join(FAMILY_KINDS)}",
            {"family": kind}) from None


def has_scale(kind: str) -> bool:
    return get_family(kind).has_scale


def location_link(kind: str, mu_response):
    """Map a response-scale location to the linear-predictor scale."""
    return get_family(kind).link(mu_response)


def location_inverse_link(kind: str, eta):
    """Back-transform a linear predictor into response units."""
    return get_family(kind).inverse_link(eta)


def _check_params(fam: Family, sigma) -> None:
    if fam.has_scale:
        if sigma is None:
            raise DomainError(f"family '{fam.kind}' requires a scale parameter")
        if np.any(np.asarray(sigma, dtype=float) <= 0):
            raise DomainError("scale parameter must be positive")
    elif sigma is not None:
        raise DomainError(f"family '{fam.kind}' has no scale parameter")


def log_likelihood(kind: str, y, mu, sigma=None):
    """Log density/mass of y under the family at (mu, sigma).

    Raises a domain error when y falls outside the family's support; this is
    how nonsensical model/outcome pairings surface to the analyst.
    """
    fam = get_family(kind)
    _check_params(fam, sigma)
    bad = fam.support_violations(y)
    if bad.size:
        vals = np.asarray(y).reshape(-1)[bad[:5]].tolist()
        raise DomainError(
            f"undefined likelihood: {fam.kind} expects {fam.support}, "
            f"got {vals}", {"family": fam.kind, "rows": bad.tolist()[:20]})
    return fam.loglik(y, mu, sigma) if fam.has_scale else fam.loglik(y, mu)


def sample_outcome(kind: str, mu, sigma=None, rng=None, size=None):
    """Draw outcomes on the data scale from the family at (mu, sigma)."""
    fam = get_family(kind)
    _check_params(fam, sigma)
    if rng is None:
        raise DomainError("sample_outcome requires an explicit seeded rng")
    return fam.sample(np.asarray(mu, dtype=float), sigma, rng, size=size)


def family_mean(kind: str, mu, sigma=None):
    """Analytic E[y] on the response scale at (mu, sigma)."""
    fam = get_family(kind)
    _check_params(fam, sigma)
    return fam.mean(mu, sigma) if fam.has_scale else fam.mean(mu)
