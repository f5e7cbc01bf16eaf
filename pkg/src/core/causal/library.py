"""Ready-made models used by the experiments and the bundled model files."""

from __future__ import annotations

from .model import CausalModel, LinearGaussian, UniformBits, UniformDigits, XorConst

__all__ = ["digit_chain", "three_node_model", "xor_pair"]


def digit_chain(n: int = 4, d: int = 10) -> CausalModel:
    """``X_1 = N_1``, ``X_j = X_{j−1} + N_j`` with ``d``-digit uniform noise."""

    nodes = tuple(f"X{index}" for index in range(1, n + 1))
    return CausalModel(
        nodes=nodes,
        parents={node: (nodes[index - 1],) if index else () for index, node in enumerate(nodes)},
        mechanisms={node: UniformDigits(digits=d) for node in nodes},
    )


def three_node_model() -> CausalModel:
    """``X1 = N1``, ``X2 = 2·X1 + N2``, ``X3 = X1 − X2 + N3`` with unit noise."""

    return CausalModel(
        nodes=("X1", "X2", "X3"),
        parents={"X1": (), "X2": ("X1",), "X3": ("X1", "X2")},
        mechanisms={
            "X1": LinearGaussian(coefficients=(), noise_sd=1.0),
            "X2": LinearGaussian(coefficients=(2.0,), noise_sd=1.0),
            "X3": LinearGaussian(coefficients=(1.0, -1.0), noise_sd=1.0),
        },
    )


def xor_pair(constant: int, bits: int) -> CausalModel:
    """Uniform ``X`` on ``bits``-bit strings and ``Y = X ⊕ constant``."""

    return CausalModel(
        nodes=("X", "Y"),
        parents={"X": (), "Y": ("X",)},
        mechanisms={
            "X": UniformBits(bits=bits),
            "Y": XorConst(constant=constant, bits=bits),
        },
    )
