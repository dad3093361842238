from .dict import *
from .expressions import *
from .validators import *
from .config import *
