from .descriptor_index import *
from .infonce import *
