from .exceptions import *
from .client import *
