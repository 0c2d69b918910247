"""scikit-learn style wrapper around the expansion engine.

``fit`` takes a problem instance rather than data: it validates the spec,
fixes the branch of ``arg p_0`` and computes the coefficient table once.
``predict`` then evaluates the truncated expansion at an array of ``z``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .coeffs import ExpansionSpec, compute_f, select_branch
from .expansion import ExpansionEvaluation, evaluate, evaluate_corollary2
from .validation import spec_from_json


class LaplaceExpansion(BaseEstimator):
    """Truncated extended Laplace expansion of one integral.

    Parameters
    ----------
    order : int
        ``N`` for the plain form, ``M`` for the regrouped form.
    form : {"theorem", "corollary"}
        Which series to sum; ``"corollary"`` needs integer ``mu`` and ``nu = 1``.
    sheet : int or None
        Sheet index of ``arg z``; ``None`` takes the first one inside ``theta_range``.
    matched : bool
        Regrouped form only: keep just the groups that match ``order`` plain terms.
    """

    def __init__(self, order=3, form="theorem", sheet=None, matched=False):
        self.order = order
        self.form = form
        self.sheet = sheet
        self.matched = matched

    def fit(self, spec, y=None):
        if isinstance(spec, dict):
            spec = spec_from_json(spec)
        if not isinstance(spec, ExpansionSpec):
            raise TypeError("fit expects an ExpansionSpec or a spec dictionary")
        if self.form not in ("theorem", "corollary"):
            raise ValueError(f"form must be 'theorem' or 'corollary', got {self.form!r}")
        if int(self.order) < 1:
            raise ValueError("order must be at least 1")
        self.spec_ = spec
        self.branch_ = select_branch(spec, spec.theta_range[0])
        if self.form == "theorem":
            rows = int(self.order) + 1 if spec.max_order() > int(self.order) else int(self.order)
            # the branch is the same over all of theta_range, so one table serves every z
            self.coefficient_table_ = compute_f(spec, self.branch_, rows)
        else:
            self.coefficient_table_ = None
        return self

    def _check_fitted(self):
        if not hasattr(self, "spec_"):
            raise NotFittedError("LaplaceExpansion is not fitted yet; call fit(spec) first")

    def evaluate(self, z) -> ExpansionEvaluation:
        """Full evaluation record (terms, partial sums, error estimate) at one ``z``."""
        self._check_fitted()
        if self.form == "theorem":
            return evaluate(self.spec_, z, int(self.order), self.sheet, table=self.coefficient_table_)
        return evaluate_corollary2(self.spec_, z, int(self.order), self.sheet, matched=self.matched)

    def predict(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.evaluate(v).value for v in z.ravel()]).reshape(z.shape)

    def heuristic_error(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([self.evaluate(v).heuristic_error for v in z.ravel()]).reshape(z.shape)
