class ScatteringError(Exception):
    """Base class for numerical failures raised by this package."""


class QuadratureError(ScatteringError):
    """Raised when successive quadrature orders fail to agree."""


class MissingMomentError(ScatteringError, KeyError):
    """Raised when a moment table lacks a requested ``(m, n, q)`` entry."""

    def __init__(self, m, n, q, side):
        self.m, self.n, self.q, self.side = m, n, q, side
        super().__init__(f"moment table has no entry for m={m}, n={n}, q={q!r} ({side} half-line)")

    def __str__(self):
        return self.args[0]


class SingularSystemError(ScatteringError):
    """Raised when the matching system is numerically rank deficient."""

    def __init__(self, rank, expected):
        self.rank, self.expected = rank, expected
        super().__init__(f"matching system has numerical rank {rank}, expected {expected} "
                         f"(deficiency {expected - rank})")


class ThresholdWarning(UserWarning):
    """Emitted when a channel momentum sits on (or very near) an excitation threshold."""


class RankDeficiencyWarning(UserWarning):
    """Emitted when the matching system is solved below full numerical rank."""
