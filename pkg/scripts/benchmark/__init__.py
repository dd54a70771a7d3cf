from .utils import timefunc