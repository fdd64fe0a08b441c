"""Exception types shared across the toolkit."""


class LorcostError(Exception):
    """Base class for all toolkit errors."""


class ParseError(LorcostError):
    def __init__(self, line_no: int, token: str, reason: str = "not a decimal integer"):
        self.line_no = line_no
        self.token = token
        super().__init__(f"line {line_no}: {token!r}: {reason}")


class NegativeAddress(LorcostError):
    def __init__(self, line_no: int, value: int):
        self.line_no = line_no
        self.value = value
        super().__init__(f"line {line_no}: negative address {value}")


class InvalidParam(LorcostError):
    def __init__(self, name: str, detail: str = ""):
        self.name = name
        msg = f"invalid parameter {name!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotQueryType(LorcostError):
    pass


class InvalidShift(LorcostError):
    def __init__(self, shift: int, block_size: int):
        self.shift = shift
        self.block_size = block_size
        super().__init__(f"shift {shift} outside [0, {block_size})")


class DistanceOutOfDomain(LorcostError):
    def __init__(self, index: int, distance: int, bound: int):
        self.index = index
        self.distance = distance
        self.bound = bound
        super().__init__(f"transition {index}: distance {distance} exceeds domain bound {bound}")


class NotConcave(LorcostError):
    def __init__(self, index: int, curvature: float):
        self.index = index
        self.curvature = curvature
        super().__init__(f"second difference at {index} is {curvature} < 0; "
                         "table is outside the decomposition's validity")


class TallCacheViolation(LorcostError):
    def __init__(self, memory: int, block: int):
        self.memory = memory
        self.block = block
        super().__init__(f"M={memory} < B^2={block * block}")


class IndexOutOfRange(LorcostError):
    pass


class NotALeaf(LorcostError):
    pass


class NotForward(LorcostError):
    pass


class InvalidRank(LorcostError):
    def __init__(self, rank: int, size: int):
        self.rank = rank
        self.size = size
        super().__init__(f"rank {rank} outside [0, {size})")
