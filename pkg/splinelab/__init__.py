from .version import __version__
from . import rkhs


__all__ = ('__version__', 'rkhs')
