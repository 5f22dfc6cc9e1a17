from .helpers import *