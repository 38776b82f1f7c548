"""Built-in verification corpora (shared by ``vbass verify`` and the test suite)."""
from __future__ import annotations

from .bass import PrimeSpec, verify_bass_transfer, verify_duality
from .exactalg import GradedRing
from .gmod import cyclic_module, direct_sum, free_module, hilbert_window, module_shift, residue_field
from .oracle import ext_dims_bruteforce
from .resolve import ext_module
from .veronese import veronese_ring


def plane():
    return GradedRing(["x", "y"])


def veronese_plane(n=2):
    return veronese_ring(plane(), n).presentation


def duality_corpus():
    """Finite-length modules over ℚ[x,y] and over R^(2) = ℚ[a1,a2,a3]/(a2²−a1a3)."""
    R = plane()
    V = veronese_plane(2)
    return [
        ("R/(x,y)^2", cyclic_module(R, ["x^2", "x*y", "y^2"])),
        ("R/(x^2,y)", cyclic_module(R, ["x^2", "y"])),
        ("R/(x^2,xy,y^3)", cyclic_module(R, ["x^2", "x*y", "y^3"])),
        ("R/(x^3,y^2)", cyclic_module(R, ["x^3", "y^2"])),
        ("k(-1)+R/(x^2,y)", direct_sum(residue_field(R, 1), cyclic_module(R, ["x^2", "y"]))),
        ("R/(x,y)^3(2)", cyclic_module(R, ["x^3", "x^2*y", "x*y^2", "y^3"], -2)),
        ("k over R^(2)", residue_field(V)),
        ("R^(2)/(a1,a3)", cyclic_module(V, ["a1", "a3"])),
        ("R^(2)/(a1,a2,a3)^2", cyclic_module(V, ["a1^2", "a1*a2", "a1*a3", "a2*a3", "a3^2"])),
        ("R^(2)/(a1^2,a2,a3)", cyclic_module(V, ["a1^2", "a2", "a3"])),
        ("R^(2)/(a1,a2^2,a3^2)(-2)", cyclic_module(V, ["a1", "a2^2", "a3^2"], 2)),
    ]


def transfer_corpus():
    """The (M, n, p) instances of Theorem 5.3 checked by the acceptance suite."""
    R = plane()
    x = PrimeSpec(R, ["x"])
    y = PrimeSpec(R, ["y"])
    return [
        ("R, n=2, (x)", free_module(R, [0]), 2, x),
        ("R(-1), n=2, (x)", free_module(R, [1]), 2, x),
        ("R/(x^2), n=2, (y)", cyclic_module(R, ["x^2"]), 2, y),
        ("R, n=3, (x)", free_module(R, [0]), 3, x),
    ]


def oracle_corpus():
    """(N, M) pairs over rings with ≤ 3 variables and generator degrees ≤ 4."""
    R = plane()
    T = GradedRing(["x", "y", "z"])
    W = GradedRing(["x", "y"], [1, 2])
    V = veronese_plane(2)
    kR, kT, kV, kW = residue_field(R), residue_field(T), residue_field(V), residue_field(W)
    return [
        ("Ext(k,k) over k[x,y]", kR, kR),
        ("Ext(k,R) over k[x,y]", kR, free_module(R, [0])),
        ("Ext(k,R/(x^2,xy,y^3))", kR, cyclic_module(R, ["x^2", "x*y", "y^3"])),
        ("Ext(R/(x^2,y),R/(x,y^3))", cyclic_module(R, ["x^2", "y"]), cyclic_module(R, ["x", "y^3"])),
        ("Ext(R/(x^2,xy,y^3),R(1))", cyclic_module(R, ["x^2", "x*y", "y^3"]), free_module(R, [1])),
        ("Ext(R/(x^4,y^4),k)", cyclic_module(R, ["x^4", "y^4"]), kR),
        ("Ext(R/(x,y^2,z^2),k) over k[x,y,z]", cyclic_module(T, ["x", "y^2", "z^2"]), kT),
        ("Ext(k,R/(xy,z)) over k[x,y,z]", kT, cyclic_module(T, ["x*y", "z"])),
        ("Ext(k,k) over R^(2)", kV, kV),
        ("Ext(k,R^(2)/(a1,a3)) over R^(2)", kV, cyclic_module(V, ["a1", "a3"])),
        ("Ext(k,k) over weights (1,2)", kW, kW),
        ("Ext(k,W) over weights (1,2)", kW, free_module(W, [0])),
        ("Ext(R/(x)+R/(y),R/(x,y)^2)", direct_sum(cyclic_module(R, ["x"]), module_shift(cyclic_module(R, ["y"]), 1)),
         cyclic_module(R, ["x^2", "x*y", "y^2"])),
    ]


def graded_ext_dims(N, M, i, lo, hi):
    E = ext_module(N, M, i).value
    if not E.rank:
        return {z: 0 for z in range(lo, hi + 1)}
    h = hilbert_window(E, lo, hi)
    return {z: h[z] for z in range(lo, hi + 1)}


def run_duality_suite(i_max=3):
    rows = []
    for name, M in duality_corpus():
        rep = verify_duality(M, i_max)
        rows.append({"name": name, "pass": rep["pass"], "mismatches": rep["mismatches"]})
    return {"pass": all(r["pass"] for r in rows), "cases": rows}


def run_transfer_suite(i_max=2, seed=0):
    rows = []
    for name, M, n, p in transfer_corpus():
        rep = verify_bass_transfer(M, n, p, i_max, seed=seed, method="both")
        rows.append({"name": name, "pass": rep["pass"], "left": rep["left"]["entries"],
                     "right": rep["right"]["entries"], "rankChecks": rep["rankChecks"]})
    return {"pass": all(r["pass"] for r in rows), "cases": rows}


def run_oracle_suite(i_max=2, window=(-8, 4)):
    rows = []
    lo, hi = window
    for name, N, M in oracle_corpus():
        for i in range(i_max + 1):
            o = ext_dims_bruteforce(N, M, i, window)
            g = graded_ext_dims(N, M, i, lo, hi)
            bad = [{"z": z, "oracle": o.dims[(i, z)], "groebner": g[z]}
                   for z in o.certified if o.dims[(i, z)] != g[z]]
            rows.append({"name": name, "i": i, "certified": len(o.certified),
                         "flags": o.flags, "pass": not bad, "mismatches": bad})
    return {"pass": all(r["pass"] for r in rows), "cases": rows}
