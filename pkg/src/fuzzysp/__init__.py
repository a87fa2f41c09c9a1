"""L-fuzzy monotonic predicates over finite domains and their strongest postconditions."""
from .lattice import (FiniteLattice, Quantale, build_chain, build_downset_lattice, build_product,
                      builtin_godel, builtin_lukasiewicz, make_quantale, quantale_product)
from .poset import DomainPoset, chain_poset, product_poset, random_poset
from .predicate import Predicate, RawValuation, eta, eta_u, delta, u_closure, scalar_u, scalar_n
from .transformer import StateTransformer, usp, sp, oracle_least_postcondition

__version__ = "0.1.0"

__all__ = [
    "FiniteLattice", "Quantale", "build_chain", "build_downset_lattice", "build_product", "builtin_godel",
    "builtin_lukasiewicz", "make_quantale", "quantale_product",
    "DomainPoset", "chain_poset", "product_poset", "random_poset",
    "Predicate", "RawValuation", "eta", "eta_u", "delta", "u_closure", "scalar_u", "scalar_n",
    "StateTransformer", "usp", "sp", "oracle_least_postcondition",
]
