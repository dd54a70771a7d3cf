from .lib import *
from .services import *
from .client import TomographyClient
