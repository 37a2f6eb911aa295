"""Ordinary least squares over scenario features.

Fitting goes through a QR decomposition rather than the normal equations,
so conditioning is limited by the design matrix itself, not its square.
Constant columns (including levers left at their inert value) are dropped
before fitting; an intercept column is always present.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .engine import IterationOutcome
from .errors import EncodingMismatch, RankDeficient

INTERCEPT = "intercept"
DEFAULT_TARGET = "total_emissions"


@dataclass(frozen=True)
class DesignMatrix:
    """Feature matrix with a leading intercept column."""

    columns: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.ndim != 2 or self.matrix.shape[1] != len(self.columns):
            raise ValueError("matrix shape inconsistent with column names")
        if not self.columns or self.columns[0] != INTERCEPT:
            raise ValueError(f"first column must be {INTERCEPT!r}")


def build_design_matrix(
    rows: Sequence[Mapping[str, float]],
    *,
    drop_constant: bool = True,
    interactions: bool = False,
) -> DesignMatrix:
    """Assemble features into a matrix, prepending the intercept.

    Column order follows the first row's key order. With ``drop_constant``
    (the default), columns taking a single value across all rows are
    removed; they are indistinguishable from the intercept. With
    ``interactions``, pairwise products of the surviving columns are
    appended as ``a*b`` columns.
    """
    if not rows:
        raise ValueError("no rows to build a design matrix from")
    names = list(rows[0])
    raw = np.array([[float(r[name]) for name in names] for r in rows], dtype=np.float64)
    if drop_constant:
        varying = [j for j in range(raw.shape[1]) if raw[:, j].min() != raw[:, j].max()]
        names = [names[j] for j in varying]
        raw = raw[:, varying]
    if interactions:
        pairs = [(a, b) for a in range(len(names)) for b in range(a + 1, len(names))]
        products = [raw[:, a] * raw[:, b] for a, b in pairs]
        if products:
            raw = np.column_stack([raw, *products])
            names = names + [f"{names[a]}*{names[b]}" for a, b in pairs]
    matrix = np.hstack([np.ones((raw.shape[0], 1)), raw])
    return DesignMatrix(columns=(INTERCEPT, *names), matrix=matrix)


@dataclass(frozen=True)
class LinearModel:
    """Fitted coefficients plus the usual fit diagnostics."""

    target: str
    columns: tuple[str, ...]
    coefficients: tuple[float, ...]
    r_squared: float
    residual_std: float
    standard_errors: tuple[float, ...]
    n_observations: int

    def predict(self, features: Mapping[str, float]) -> float:
        """Evaluate the model on one feature mapping.

        Extra keys are ignored; missing ones raise
        :class:`EncodingMismatch`. ``a*b`` interaction columns are
        computed from their parts.
        """
        missing = sorted(
            {
                part
                for c in self.columns
                if c != INTERCEPT
                for part in c.split("*")
                if part not in features
            }
        )
        if missing:
            raise EncodingMismatch(missing)
        value = 0.0
        for name, coef in zip(self.columns, self.coefficients):
            if name == INTERCEPT:
                value += coef
            else:
                term = 1.0
                for part in name.split("*"):
                    term *= float(features[part])
                value += coef * term
        return value

    def predict_with_band(self, features: Mapping[str, float]) -> tuple[float, float]:
        """Point prediction together with the one-sigma residual band."""
        return self.predict(features), self.residual_std

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "columns": list(self.columns),
            "coefficients": list(self.coefficients),
            "r_squared": self.r_squared,
            "residual_std": self.residual_std,
            "standard_errors": list(self.standard_errors),
            "n_observations": self.n_observations,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "LinearModel":
        return cls(
            target=str(data["target"]),
            columns=tuple(data["columns"]),
            coefficients=tuple(float(c) for c in data["coefficients"]),
            r_squared=float(data["r_squared"]),
            residual_std=float(data["residual_std"]),
            standard_errors=tuple(float(s) for s in data["standard_errors"]),
            n_observations=int(data["n_observations"]),
        )


def fit_ols(design: DesignMatrix, y: np.ndarray, *, target: str = DEFAULT_TARGET) -> LinearModel:
    """Least squares fit of ``y`` on the design matrix.

    Raises :class:`RankDeficient` naming the first offending column when
    the matrix does not have full column rank. A zero-variance target
    yields a perfect fit (r_squared 1) rather than a division by zero.
    """
    n, k = design.matrix.shape
    if len(y) != n:
        raise ValueError(f"target length {len(y)} does not match {n} rows")
    if n < k:
        raise ValueError(f"need at least {k} observations for {k} columns, got {n}")

    q, r = np.linalg.qr(design.matrix)
    diag = np.abs(np.diag(r))
    tolerance = diag.max() * max(n, k) * np.finfo(np.float64).eps if diag.max() > 0 else 0.0
    for j, d in enumerate(diag):
        if d <= tolerance:
            raise RankDeficient(design.columns[j])

    beta = np.linalg.solve(r, q.T @ y)
    residuals = y - design.matrix @ beta
    ss_res = float(residuals @ residuals)
    centered = y - y.mean()
    ss_tot = float(centered @ centered)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    dof = n - k
    residual_std = float(np.sqrt(ss_res / dof)) if dof > 0 else 0.0
    r_inv = np.linalg.inv(r)
    unscaled = np.einsum("ij,ij->i", r_inv, r_inv)  # diag of (X'X)^-1
    standard_errors = residual_std * np.sqrt(unscaled)

    return LinearModel(
        target=target,
        columns=design.columns,
        coefficients=tuple(float(b) for b in beta),
        r_squared=float(r_squared),
        residual_std=residual_std,
        standard_errors=tuple(float(s) for s in standard_errors),
        n_observations=n,
    )


def fit_outcome_model(
    outcomes: Sequence[IterationOutcome],
    *,
    target: str = DEFAULT_TARGET,
) -> LinearModel:
    """Fit the configured target on the scenario features of a run."""
    rows = [o.params.feature_values() for o in outcomes]
    design = build_design_matrix(rows)
    y = np.array([getattr(o, target) for o in outcomes], dtype=np.float64)
    return fit_ols(design, y, target=target)
