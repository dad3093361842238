from .records import *
from .utils import *
from .index import *
from .motion import *
from .frames import *
from .clustering import *
from .density import *
