# -*- coding: utf-8 -*-
"""Exceptions raised by the wall-crossing engine."""


class WallCrossError(ValueError):
    pass


class FlavorDirectionError(WallCrossError):
    pass


class NonPrimitiveError(WallCrossError):
    pass


class CutoffMismatchError(WallCrossError):
    pass


class NonUnitSeriesError(WallCrossError):
    # constant term != 1, or a non-constant term of order 0
    pass


class IncoherentEnergyError(WallCrossError):
    pass


class SceneError(WallCrossError):
    pass


class GenericityError(SceneError):
    pass


class NonTerminatingStageError(WallCrossError):
    pass


class DegeneratePositionError(WallCrossError):
    pass


class NonTrivalentVertexError(WallCrossError):
    pass


class BeyondCutoffError(WallCrossError):
    # requested multiple needs a Novikov exponent the truncation drops
    pass
