"""Compare the compiled and numpy statevector kernels.

    python3 benchmarks/bench_kernels.py [--qubits 8 10 12] [--repeat 5]

Times a forward circuit evaluation, a Hamiltonian application and a full
adjoint gradient for HEA D=3 on the XXZ chain, for each backend that is
importable, and checks both backends agree.
"""
import argparse
import timeit

import numpy as np

from nnvqe import _pykernels, build_hea, build_xxz

try:
    from nnvqe import _ckernels
except ImportError:
    _ckernels = None


def workload(kern, circuit, theta, h):
    xs, zs, ys, slots = circuit.packed()
    hx, hz, hc = h.packed()
    dim = 2 ** circuit.n_qubits

    def forward():
        psi = np.zeros(dim, complex)
        psi[0] = 1
        kern.run_gates(psi, xs, zs, ys, slots, theta, 1.0)
        return psi

    def hamiltonian():
        return kern.apply_pauli_sum(psi0, hx, hz, hc)

    def gradient():
        psi = forward()
        lam = kern.apply_pauli_sum(psi, hx, hz, hc)
        grad = np.zeros(len(theta))
        kern.adjoint_sweep(psi, lam, xs, zs, ys, slots, theta, grad)
        return grad

    psi0 = forward()
    return {"forward": forward, "apply_h": hamiltonian, "gradient": gradient}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[8, 10, 12])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the numpy fallback only")

    print(f"{'n':>3} {'op':<9}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    rng = np.random.default_rng(0)
    for n in args.qubits:
        c = build_hea(n, 3)
        theta = rng.uniform(-np.pi, np.pi, c.n_params)
        h = build_xxz(n, 2.0, 0.75)
        loads = {b: workload(k, c, theta, h) for b, k in backends.items()}
        if len(loads) == 2:
            g_py, g_c = loads["python"]["gradient"](), loads["cython"]["gradient"]()
            assert np.allclose(g_py, g_c, atol=1e-10), "backends disagree"
        for op in ("forward", "apply_h", "gradient"):
            times = {b: min(timeit.repeat(w[op], number=1, repeat=args.repeat)) for b, w in loads.items()}
            line = f"{n:>3} {op:<9}" + "".join(f"{1e3 * t:>10.2f}ms" for t in times.values())
            if len(times) == 2:
                line += f"   {times['python'] / times['cython']:6.1f}x"
            print(line)


if __name__ == "__main__":
    main()
