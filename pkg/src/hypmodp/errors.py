class HypothesisViolation(Exception):
    """A structural precondition of the construction does not hold for this prime."""


class NotPIntegral(ValueError):
    """A series coefficient has negative p-adic valuation."""

    def __init__(self, index: int):
        super().__init__(f"series not p-integral at index {index}")
        self.index = index
