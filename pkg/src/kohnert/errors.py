"""Exceptions shared across the package."""


class KohnertError(Exception):
    pass


class InputError(KohnertError):
    """Unparseable or structurally invalid input."""


class BudgetExceeded(KohnertError):
    """A bounded search ran out of its configured budget; the answer is undecided."""


class ClosureBudgetExceeded(BudgetExceeded):
    def __init__(self, budget: int, visited: int):
        self.budget = budget
        self.visited = visited
        super().__init__(f"closure exceeded budget of {budget} diagrams ({visited} visited)")


class ShellingBudgetExceeded(BudgetExceeded):
    def __init__(self, budget: int, nodes: int, facets: int, best_depth: int):
        self.budget = budget
        self.nodes = nodes
        self.facets = facets
        self.best_depth = best_depth
        super().__init__(
            f"shelling search exceeded budget of {budget} states "
            f"({nodes} visited, {best_depth}/{facets} facets placed at best)"
        )


class IsomorphismBudgetExceeded(BudgetExceeded):
    def __init__(self, budget: int, nodes: int, depth: int):
        self.budget = budget
        self.nodes = nodes
        self.depth = depth
        super().__init__(
            f"isomorphism search exceeded budget of {budget} nodes "
            f"({nodes} visited, partial map of size {depth})"
        )
