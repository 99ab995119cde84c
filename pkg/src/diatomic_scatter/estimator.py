"""scikit-learn style front end.

:class:`CompositeScatterer` holds the physical system as hyperparameters and
maps a column of incident momenta to reflection/transmission coefficients,
so it drops into pipelines, ``clone`` and ``GridSearchCV``-style parameter
handling.
"""
import numbers
import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import RankDeficiencyWarning, ThresholdWarning
from .kinematics import IncidentSpec, SystemParams, cutoff_index
from .matching import scattering_solution
from .observables import coefficients

__all__ = ["CompositeScatterer", "check_momenta", "check_system"]


def check_momenta(X):
    """Validate incident momenta given as shape (n,) or (n, 1); returns shape (n,)."""
    X = check_array(X, ensure_2d=False, dtype=np.float64)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single column of incident momenta, got shape {X.shape}")
        X = X[:, 0]
    if np.any(X <= 0):
        raise ValueError("incident momenta must be positive")
    return X


def check_system(est):
    """Build and validate :class:`SystemParams` from estimator hyperparameters."""
    if not isinstance(est.l, numbers.Integral) or est.l < 0:
        raise ValueError(f"l must be a non-negative integer, got {est.l!r}")
    if est.n_modes is not None and (not isinstance(est.n_modes, numbers.Integral) or est.n_modes < 1):
        raise ValueError(f"n_modes must be a positive integer or None, got {est.n_modes!r}")
    return SystemParams(est.m1, est.m2, est.gamma1, est.gamma2, est.omega, est.hbar)


class CompositeScatterer(TransformerMixin, BaseEstimator):
    """Per-channel reflection/transmission for a bound pair on delta potentials.

    Parameters
    ----------
    m1, m2 : float
        Particle masses.
    gamma1, gamma2 : float
        Delta strengths seen by particle 1 and particle 2.
    omega : float
        Binding frequency.
    l : int
        Incident internal mode.
    n_modes : int or None
        Channel truncation; None means ``n_c + 8`` at each momentum.
    hbar : float

    Attributes
    ----------
    n_channels_ : int
        Open channels at the largest momentum seen in ``fit``; sets the output
        width of :meth:`transform`.
    system_ : SystemParams
    """

    def __init__(self, m1=1.0, m2=1.0, gamma1=1.0, gamma2=0.0, omega=3.0, l=0, n_modes=None, hbar=1.0):
        self.m1 = m1
        self.m2 = m2
        self.gamma1 = gamma1
        self.gamma2 = gamma2
        self.omega = omega
        self.l = l
        self.n_modes = n_modes
        self.hbar = hbar

    def fit(self, X, y=None):
        K0 = check_momenta(X)
        self.system_ = check_system(self)
        self.n_features_in_ = 1
        self.n_channels_ = max(cutoff_index(self.system_, IncidentSpec(k, self.l)) for k in K0) + 1
        return self

    def _solve(self, k):
        inc = IncidentSpec(float(k), self.l)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RankDeficiencyWarning)
            warnings.simplefilter("ignore", ThresholdWarning)
            ch, amps = scattering_solution(self.system_, inc, self.n_modes)
        return coefficients(ch, amps, inc)

    def transform(self, X):
        """Rows ``[j_re_0 .. j_re_{c-1}, j_tr_0 .. j_tr_{c-1}, j_total]`` with c = ``n_channels_``."""
        check_is_fitted(self, "n_channels_")
        K0 = check_momenta(X)
        c = self.n_channels_
        out = np.zeros((len(K0), 2 * c + 1))
        for i, k in enumerate(K0):
            table = self._solve(k)
            width = len(table.j_re)
            if width > c:
                raise ValueError(f"K0={k} opens {width} channels but the estimator was fitted for {c}")
            out[i, :width] = table.j_re
            out[i, c:c + width] = table.j_tr
            out[i, -1] = table.j_total
        return out

    def predict(self, X):
        """Total reflection and transmission, shape (n, 2)."""
        Z = self.transform(X)
        c = self.n_channels_
        return np.column_stack([Z[:, :c].sum(axis=1), Z[:, c:2 * c].sum(axis=1)])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_channels_")
        c = self.n_channels_
        names = [f"j_re_{n}" for n in range(c)] + [f"j_tr_{n}" for n in range(c)] + ["j_total"]
        return np.asarray(names, dtype=object)
