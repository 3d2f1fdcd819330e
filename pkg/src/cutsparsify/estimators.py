"""Estimator-style wrappers: ``fit`` builds a sparsifier, ``transform`` returns it.

The wrappers take graph instances rather than arrays, so only the parameter
handling of scikit-learn's ``BaseEstimator`` is reused.
"""

from __future__ import annotations

from fractions import Fraction

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .graph import Instance, InstanceError, is_quasi_bipartite
from .planar.embedding import EmbeddedInstance
from .planar.pipeline import one_face_sparsify
from .quasi_approx import SamplingParams, approx_sparsifier, approx_sparsifier_verified
from .quasi_exact import NotQuasiBipartiteError, exact_sparsifier
from .verify import QualityReport, verify_quality


def check_instance(g, min_terminals: int = 2, quasi_bipartite: bool = False) -> Instance:
    """Validate the input of a sparsification call and return the plain instance."""
    if isinstance(g, EmbeddedInstance):
        g = g.instance
    if not isinstance(g, Instance):
        raise TypeError(f"expected an Instance, got {type(g).__name__}")
    if g.k < min_terminals:
        raise InstanceError(f"need at least {min_terminals} terminals, got {g.k}")
    if quasi_bipartite and not is_quasi_bipartite(g):
        raise NotQuasiBipartiteError("input graph has an edge between two non-terminals")
    return g


def check_embedded(e) -> EmbeddedInstance:
    if not isinstance(e, EmbeddedInstance):
        raise TypeError("expected an EmbeddedInstance (rotation system with an outer face)")
    e.validate()
    return e


def check_epsilon(epsilon) -> Fraction:
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    return eps


class _Sparsifier(BaseEstimator):
    def _check_fitted(self):
        if not hasattr(self, "sparsifier_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit first")

    def transform(self, g=None) -> Instance:
        """The fitted sparsifier. ``g``, if given, must be the fitted input."""
        self._check_fitted()
        if g is not None:
            inst = g.instance if isinstance(g, EmbeddedInstance) else g
            if inst is not self.input_ and not inst.same_as(self.input_):
                raise ValueError("transform only applies to the instance passed to fit")
        return self.sparsifier_

    def fit_transform(self, g, y=None) -> Instance:
        return self.fit(g).transform()

    def verify(self, **kw) -> QualityReport:
        """Exact quality of the fitted sparsifier against its input."""
        self._check_fitted()
        return verify_quality(self.input_, self.sparsifier_, **kw)


class ProfileSparsifier(_Sparsifier):
    """Quality-1 contraction of a quasi-bipartite graph by vertex profile."""

    def __init__(self, cap: int = 16):
        self.cap = cap

    def fit(self, g, y=None):
        g = check_instance(g, quasi_bipartite=True)
        self.input_ = g
        self.sparsifier_, self.contraction_ = exact_sparsifier(g, self.cap)
        return self


class SamplingSparsifier(_Sparsifier):
    """Randomised (1+3 eps) contraction sparsifier of a quasi-bipartite graph.

    With ``retries`` > 0 the result is verified and rebuilt with fresh seeds
    until it meets the target quality; ``success_`` records the outcome.
    """

    def __init__(self, epsilon=1, seed: int = 0, retries: int = 0, bitmap_cap: int = 20):
        self.epsilon = epsilon
        self.seed = seed
        self.retries = retries
        self.bitmap_cap = bitmap_cap

    def fit(self, g, y=None):
        g = check_instance(g, quasi_bipartite=True)
        p = SamplingParams(check_epsilon(self.epsilon), g.k, self.seed)
        self.input_ = g
        if self.retries:
            out = approx_sparsifier_verified(g, p, retries=self.retries)
            res = out.result
            self.success_ = out.success
            self.attempts_ = out.attempts
        else:
            res = approx_sparsifier(g, p, self.bitmap_cap)
            self.success_ = None
            self.attempts_ = []
        self.sparsifier_ = res.sparsifier
        self.contraction_ = res.contraction
        self.diagnostics_ = res.diagnostics
        return self


class OneFaceSparsifier(_Sparsifier):
    """Sparsifier of a one-face planar instance via its dual and an emulator."""

    def __init__(self, emulator: str = "identity", epsilon=0):
        self.emulator = emulator
        self.epsilon = epsilon

    def fit(self, e, y=None):
        e = check_embedded(e)
        check_instance(e.instance)
        res = one_face_sparsify(e, self.emulator, Fraction(self.epsilon))
        self.input_ = e.instance
        self.sparsifier_ = res.sparsifier
        self.n_pieces_ = len(res.pieces)
        return self
