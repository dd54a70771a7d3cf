from .benchmark import *