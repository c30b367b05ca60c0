"""Exception hierarchy shared by every solver module."""


class SwitchGameError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGame(SwitchGameError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotASwitchVertex(SwitchGameError):
    pass


class NotAPlayerVertex(SwitchGameError):
    pass


class IllegalChoice(SwitchGameError):
    pass


class ChoiceRequired(SwitchGameError):
    def __init__(self, vertex, name):
        self.vertex = vertex
        self.name = name
        super().__init__(f"vertex {name} requires a player choice")


class NotOnePlayer(SwitchGameError):
    pass


class StateLimitExceeded(SwitchGameError):
    def __init__(self, seen):
        self.seen = seen
        super().__init__(f"state limit exceeded after {seen} states")


class ShapeMismatch(SwitchGameError):
    pass


class NotWinningPlay(SwitchGameError):
    pass


class RepeatedState(SwitchGameError):
    pass


class StrategyStuck(SwitchGameError):
    pass


class UndefinedMove(SwitchGameError):
    pass


class EnumerationCapExceeded(SwitchGameError):
    pass


class MalformedFormula(SwitchGameError, ValueError):
    pass


class NotThreeBounded(MalformedFormula):
    pass
