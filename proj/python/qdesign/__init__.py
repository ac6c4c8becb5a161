from ._qdesign import *  # noqa: F401,F403
from ._qdesign import __doc__  # noqa: F401
