"""
SVG line plot for fidelity curves
"""

import io
from typing import Sequence


SVG_HASH_SALT = "adcodes"
FIGURE_SIZE = (6.4, 4.2)


def fidelity_svg(gammas: Sequence[float], f_code: Sequence[float], f_bare: Sequence[float],
                 code_label: str, bare_label: str) -> str:
    """Code and bare curves with legend; equal inputs give byte-identical output"""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rc = {
        "svg.hashsalt": SVG_HASH_SALT,
        "svg.fonttype": "none",
        "font.family": "DejaVu Sans",
        "axes.unicode_minus": False,
    }
    with matplotlib.rc_context(rc):
        fig, ax = plt.subplots(figsize=FIGURE_SIZE, constrained_layout=True)
        try:
            ax.plot(list(gammas), list(f_code), color="#1f77b4", linewidth=2, label=code_label)
            ax.plot(list(gammas), list(f_bare), color="#d62728", linewidth=2, linestyle="--", label=bare_label)
            ax.set_xlabel("gamma")
            ax.set_ylabel("fidelity")
            ax.grid(True, alpha=0.3)
            ax.legend(loc="best", fontsize=9)

            buffer = io.StringIO()
            fig.savefig(buffer, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return buffer.getvalue()
