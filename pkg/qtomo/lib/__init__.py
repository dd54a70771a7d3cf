from .constants import *
from .exceptions import *
from .logger import SDKLogger
from .version import ClientVersion
from .grid import Axis, SampledField, FieldInterpolator, make_axis, integrate, continuous_ft, partial_ft, resample
from .utils import Utils, ProgressBar, KB, MB
