"""Closed-form fragmentation and recall-size model for FIFO lot assignment.

A customer order of ``O`` units filled from batches of ``B`` units under
FIFO is composed of a small number of batch fragments. Because the first
batch may be partially consumed by earlier orders (uniform offset
``u in {0..B-1}``), the fragment count is a two-point random variable::

    fr_min = ceil(O / B)            with probability p_fr_min
    fr_max = fr_min + 1             with probability p_fr_max

and its expectation has the closed form ``(O + B - 1) / B``. One bad batch
anywhere in the order forces a full recall of that order, so the expected
fraction recalled follows from the per-batch crisis probability raised to
the (expected) fragment count.

All fragment statistics are exact `fractions.Fraction` values; recall
probabilities and sizes are IEEE floats. Everything here is a pure function
of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "InvalidParamsError",
    "ModelParams",
    "FragmentationStats",
    "fragment_stats",
    "expected_fragments",
    "recall_probability",
    "recall_probability_exact",
    "expected_recall_size",
    "recall_size_formula",
    "recall_limit_batch_inf",
    "recall_limit_order_inf",
]


class InvalidParamsError(ValueError):
    """Raised when model parameters violate their invariants."""


def _check_positive_int(name: str, value) -> int:
    try:
        as_int = int(value)
    except (TypeError, ValueError):
        raise InvalidParamsError(f"{name} must be an integer, got {value!r}")
    if as_int != value or isinstance(value, bool):
        raise InvalidParamsError(f"{name} must be an integer, got {value!r}")
    if as_int < 1:
        raise InvalidParamsError(f"{name} must be >= 1, got {as_int}")
    return as_int


def _check_probability(name: str, value) -> float:
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        raise InvalidParamsError(f"{name} must be a real number, got {value!r}")
    if not 0.0 <= as_float <= 1.0:
        raise InvalidParamsError(f"{name} must be in [0, 1], got {as_float}")
    return as_float


@dataclass(frozen=True)
class ModelParams:
    """The four scalars driving every formula in the model.

    order_size      units per customer order (>= 1)
    batch_size      units per input batch (>= 1)
    total_quantity  total ordered quantity across the horizon (>= order_size)
    crisis_prob     probability that any given batch is unacceptable, in [0, 1]
    """

    order_size: int
    batch_size: int
    total_quantity: int
    crisis_prob: float

    def __post_init__(self):
        object.__setattr__(self, "order_size",
                           _check_positive_int("order_size", self.order_size))
        object.__setattr__(self, "batch_size",
                           _check_positive_int("batch_size", self.batch_size))
        object.__setattr__(self, "total_quantity",
                           _check_positive_int("total_quantity", self.total_quantity))
        object.__setattr__(self, "crisis_prob",
                           _check_probability("crisis_prob", self.crisis_prob))
        if self.order_size > self.total_quantity:
            raise InvalidParamsError(
                "order size exceeds total quantity "
                f"({self.order_size} > {self.total_quantity})")


@dataclass(frozen=True)
class FragmentationStats:
    """Two-point distribution of the number of batch fragments in one order.

    ``p_fr_min + p_fr_max == 1`` and
    ``expected_fragments == p_fr_min*fr_min + p_fr_max*fr_max`` hold exactly;
    the probabilities and expectation are rationals.
    """

    fr_min: int
    fr_max: int
    p_fr_min: Fraction
    p_fr_max: Fraction
    expected_fragments: Fraction


def fragment_stats(params: ModelParams) -> FragmentationStats:
    """Fragment-count distribution for one order under FIFO.

    With ``r = order_size mod batch_size``: the maximal fragment count occurs
    with probability ``(B-1)/B`` when r == 0 and ``(r-1)/B`` otherwise
    (the number of first-batch offsets that force an extra fragment). When
    that probability is zero the count is deterministic and fr_max is
    reported equal to fr_min rather than as an unreachable value.
    """
    o, b = params.order_size, params.batch_size
    r = o % b
    p_fr_max = Fraction(b - 1, b) if r == 0 else Fraction(r - 1, b)
    p_fr_min = 1 - p_fr_max
    fr_min = -(-o // b)  # ceil(o / b)
    fr_max = fr_min + 1 if p_fr_max > 0 else fr_min
    expected = p_fr_min * fr_min + p_fr_max * fr_max
    return FragmentationStats(fr_min=fr_min, fr_max=fr_max,
                              p_fr_min=p_fr_min, p_fr_max=p_fr_max,
                              expected_fragments=expected)


def expected_fragments(params: ModelParams) -> Fraction:
    """Expected fragment count ``(O + B - 1) / B``, as an exact rational."""
    return Fraction(params.order_size + params.batch_size - 1,
                    params.batch_size)


def _order_crisis_prob(crisis_prob: float, exponent: float) -> float:
    """P(at least one of ``exponent`` independent batches is in crisis).

    ``1 - (1 - p)**exponent`` with the algebraically exact values returned
    at the edges: p = 0 -> 0, p = 1 -> 1, exponent = 1 -> p (the float
    round trip 1-(1-p) is not the identity, the closed form is).
    """
    if crisis_prob == 0.0:
        return 0.0
    if crisis_prob == 1.0:
        return 1.0
    if exponent == 1.0:
        return crisis_prob
    return 1.0 - (1.0 - crisis_prob) ** exponent


def recall_probability(params: ModelParams) -> float:
    """Probability one order is recalled, via the expected fragment count.

    Uses the generally fractional expectation as the exponent; see
    :func:`recall_probability_exact` for the exact two-point mixture.
    """
    o, b = params.order_size, params.batch_size
    return _order_crisis_prob(params.crisis_prob, (o + b - 1) / b)


def recall_probability_exact(params: ModelParams) -> float:
    """Recall probability as the exact mixture over both fragment counts.

    Never exceeds :func:`recall_probability` (the fractional-exponent form
    is the concave map evaluated at the mean), with equality when the
    fragment count is deterministic or crisis_prob is 0 or 1.
    """
    stats = fragment_stats(params)
    p = params.crisis_prob
    if stats.p_fr_max == 0:
        return _order_crisis_prob(p, float(stats.fr_min))
    return (float(stats.p_fr_min) * _order_crisis_prob(p, float(stats.fr_min))
            + float(stats.p_fr_max) * _order_crisis_prob(p, float(stats.fr_max)))


def expected_recall_size(params: ModelParams) -> float:
    """Expected recalled units out of the total quantity.

    ``Q * (1 - (1 - p)**((O + B - 1)/B))``; an order-size-1 row reduces to
    exactly ``Q * p`` for every batch size.
    """
    return params.total_quantity * recall_probability(params)


def recall_size_formula(total_quantity: int, order_size: int,
                        batch_size: int, crisis_prob: float) -> float:
    """The recall-size closed form evaluated on raw arguments.

    Identical to :func:`expected_recall_size` on feasible scenarios, but
    without coupling the order size to the total quantity: the expression
    extends smoothly into the order_size > total_quantity region, which is
    how its large-order limit is probed even though such scenarios are
    rejected as model parameters.
    """
    q = _check_positive_int("total_quantity", total_quantity)
    o = _check_positive_int("order_size", order_size)
    b = _check_positive_int("batch_size", batch_size)
    p = _check_probability("crisis_prob", crisis_prob)
    return q * _order_crisis_prob(p, (o + b - 1) / b)


def recall_limit_batch_inf(total_quantity: int, crisis_prob: float) -> float:
    """Recall size in the infinitely-large-batch limit: ``Q * p``.

    Every order then sits inside a single batch fragment, so only the bare
    batch crisis probability remains.
    """
    q = _check_positive_int("total_quantity", total_quantity)
    p = _check_probability("crisis_prob", crisis_prob)
    return q * p


def recall_limit_order_inf(total_quantity: int) -> float:
    """Recall size in the infinitely-large-order limit: ``Q``.

    An unboundedly large order spans unboundedly many batches, so for any
    positive crisis probability everything shipped is recalled. (For
    crisis_prob == 0 the recall size is identically zero instead.)
    """
    q = _check_positive_int("total_quantity", total_quantity)
    return float(q)
