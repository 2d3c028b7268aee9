"""Three-valued answers for semi-decided questions."""

from enum import Enum


class Tri(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, flag):
        return cls.YES if flag else cls.NO

    def __and__(self, other):
        if self is Tri.NO or other is Tri.NO:
            return Tri.NO
        if self is Tri.UNKNOWN or other is Tri.UNKNOWN:
            return Tri.UNKNOWN
        return Tri.YES

    def __bool__(self):
        if self is Tri.UNKNOWN:
            raise ValueError("cannot coerce an unknown answer to bool")
        return self is Tri.YES

    def __str__(self):
        return self.value
