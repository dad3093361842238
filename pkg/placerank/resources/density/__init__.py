from .mixture import *
from .fitting import *
from .integration import *
