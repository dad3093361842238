from .world import *
from .database import *
from .trajectory import *
from .scenario import *
