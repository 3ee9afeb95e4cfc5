"""Invariants of descending HNN extensions F_n *_g of free groups."""
from __future__ import annotations

from .alexander import alexander_polynomial
from .hnn import Character, HnnGroup, abelianize, parse_character
from .l2 import L2Engine, thurston_width
from .polytopes import IntPolytope, VirtualPolytope
from .upg import parse_certificate, upg_sigma, upg_torsion_polytope, verify_certificate
from .words import Endomorphism, parse_endomorphism, parse_word

__version__ = "0.1.0"
