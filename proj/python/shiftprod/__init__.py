"""Certificates and sieve checks for shifted-power products.

The heavy lifting lives in the C++ extension ``shiftprod._core``; this
package re-exports its surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
