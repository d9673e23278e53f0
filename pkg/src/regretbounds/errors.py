class DomainError(ValueError):
    """An argument lies outside the domain where a formula or theorem applies."""


class HypothesisError(DomainError):
    """A theorem hypothesis is unmet; ``hypothesis`` names the failed condition."""

    def __init__(self, message: str, hypothesis: str):
        super().__init__(message)
        self.hypothesis = hypothesis
