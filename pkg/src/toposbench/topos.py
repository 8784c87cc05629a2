"""Facade bundling the topos structure of Sets^C over one base category.

Construction of Omega and exponentials is cached per instance; all values are
immutable after certified construction, so sharing is safe.
"""

from . import limits
from .exponential import ExpPresheaf
from .omega import omega_structure


class Topos:
    def __init__(self, base):
        self.base = base
        self._terminal = None
        self._initial = None
        self._omega = None
        self._exps = {}

    @property
    def terminal(self):
        if self._terminal is None:
            self._terminal = limits.terminal(self.base)
        return self._terminal

    @property
    def initial(self):
        if self._initial is None:
            self._initial = limits.initial(self.base)
        return self._initial

    @property
    def omega(self):
        if self._omega is None:
            self._omega = omega_structure(self.base)
        return self._omega

    def exponential(self, A, B):
        key = (id(A), id(B))
        if key not in self._exps:
            self._exps[key] = ExpPresheaf(A, B)
        return self._exps[key]

    def power(self, A):
        return self.exponential(A, self.omega.omega)

    def product(self, *factors, name=None):
        return limits.product_list(list(factors), name=name)

    def global_elements(self, F):
        return limits.global_elements(F)
