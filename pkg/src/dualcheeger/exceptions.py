class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class BudgetError(RuntimeError):
    """Exhaustive search would exceed the allowed number of evaluations."""

    def __init__(self, required, budget, what=""):
        self.required = float(required)
        self.budget = float(budget)
        self.what = what
        msg = f"required {self.required:.3g} evaluations exceeds budget {self.budget:.3g}"
        if what:
            msg = f"{what}: {msg}"
        super().__init__(msg)


class PipelineError(RuntimeError):
    """The randomized clustering pipeline failed to find an admissible partition."""

    def __init__(self, message, stats=None):
        self.stats = dict(stats or {})
        super().__init__(message)


class ParseError(ValueError):
    """Malformed edge-list input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
