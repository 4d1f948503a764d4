"""
Undefined functions ("atoms") of the symbolic kernel.

An atom such as ``G(z)`` is a sympy function class whose instances carry the
atom name and a tuple of derivative orders, one per template variable.
Differentiation never produces ``sympy.Derivative``: the chain rule is
delegated to sympy and every partial derivative of an atom is again an atom
application with one order raised, e.g. ``D[G, z, 2](x*u_x)``.
"""

import functools

import sympy as sp


class AtomApplication(sp.Function):
    """
    Application of a declared atom, possibly differentiated.

    Attributes
    ----------
    atom_name : str
        Declared name of the atom.
    orders : tuple of int
        Derivative order with respect to each template variable.
    """

    atom_name = ""
    orders = ()

    @classmethod
    def eval(cls, *args):
        return None

    def fdiff(self, argindex=1):
        orders = list(self.orders)
        orders[argindex - 1] += 1
        return atom_function(self.atom_name, tuple(orders))(*self.args)

    def _eval_is_extended_real(self):
        return True

    @property
    def total_order(self) -> int:
        return sum(self.orders)

    def underived(self) -> "AtomApplication":
        """Return the undifferentiated application on the same arguments."""
        return atom_function(self.atom_name, (0,) * len(self.orders))(*self.args)


@functools.cache
def atom_function(name: str, orders: tuple) -> type:
    """
    Return the function class of atom ``name`` differentiated ``orders`` times.

    Classes are cached so that equal (name, orders) pairs compare equal as
    sympy heads.
    """
    if any(order < 0 for order in orders):
        raise ValueError(f"negative derivative order {orders} for atom {name}")
    class_name = name if not any(orders) else f"{name}[{','.join(map(str, orders))}]"
    return type(
        class_name,
        (AtomApplication,),
        {"atom_name": name, "orders": tuple(orders), "nargs": len(orders)},
    )


def atom_applications(e: sp.Basic) -> set:
    """Every atom application occurring anywhere in ``e``."""
    return set(e.atoms(AtomApplication))
