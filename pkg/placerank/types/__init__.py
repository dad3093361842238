from .serialisation import *
from .config import *
