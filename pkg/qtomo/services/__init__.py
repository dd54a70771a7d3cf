from .states import StatesService, PureState, DensityKernel
from .transforms import TransformsService, CharFunction, WignerFunction
from .tomography import TomographyService, Tomogram, RadialSlice
from .fidelity import FidelityService, Route, TransitionResult
from .sobolev import SobolevService, RegularityReport, Verdict
from .files import FilesService
