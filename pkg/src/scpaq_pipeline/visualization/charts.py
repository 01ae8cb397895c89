"""
Threshold curve and rate plots.
"""

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from ..config.logging import get_logger  # noqa: E402
from ..core.jnd_model import DEFAULT_PARAMS, threshold_curve  # noqa: E402
from ..data.models import CHANNELS, Component, MaskingModel, MaskingParams  # noqa: E402
from ..errors import ArtifactError, DomainError  # noqa: E402

logger = get_logger(__name__)

_LABELS = {
    Component.Y: ("L(mu_Y)", "Luminance masking threshold"),
    Component.CB: ("C_Cb(mu_Cb)", "Chrominance masking threshold (Cb)"),
    Component.CR: ("C_Cr(mu_Cr)", "Chrominance masking threshold (Cr)"),
}


def plot_curves(
    component: Union[Component, str],
    bit_depths: Sequence[int],
    params: MaskingParams = DEFAULT_PARAMS,
    path: Union[str, Path] = "curves.png",
    normalized: bool = True,
) -> Path:
    """Plot the threshold of *component* for each bit depth into one figure.

    With ``normalized`` the x axis is ``mu / 2^b`` so curves for different
    bit depths overlay; otherwise raw sample values are used.
    """
    component = Component(component)
    ylabel, title = _LABELS[component]
    path = Path(path)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    try:
        for bit_depth in bit_depths:
            mu, values = threshold_curve(component, bit_depth, params)
            x = mu / float(1 << bit_depth) if normalized else mu
            ax.plot(x, values, label=f"b = {bit_depth}")
        ax.set_xlabel("mu / 2^b" if normalized else "mean sample value mu")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, dpi=120)
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    finally:
        plt.close(fig)

    logger.debug(f"Curve plot written to {path}")
    return path


def plot_rate_curves(
    table: pd.DataFrame,
    path: Union[str, Path] = "rates.png",
    model: Union[MaskingModel, str] = MaskingModel.SCPAQ,
) -> Path:
    """Plot estimated kbits per channel over the base QPs of a summary table.

    One panel per channel, one line for *model* and one per anchor. The
    ``avg`` rows of the table are skipped.
    """
    model = MaskingModel(model)
    rows = table[table["qp"].astype(str) != "avg"]
    if rows.empty:
        raise DomainError("Summary table holds no per-QP rows to plot")
    path = Path(path)

    series = {model.value: "bits_model"}
    for anchor in (MaskingModel.NONE, MaskingModel.IDSQ):
        series.setdefault(anchor.value, f"bits_{anchor.value}")

    fig, axes = plt.subplots(1, len(CHANNELS), figsize=(12.0, 4.0))
    try:
        for ax, channel in zip(axes, CHANNELS):
            subset = rows[rows["channel"] == channel]
            qps = subset["qp"].astype(int)
            for label, column in series.items():
                ax.plot(qps, subset[column] / 1000.0, marker="o", label=label)
            ax.set_title(Component(channel).name.capitalize())
            ax.set_xlabel("base QP")
            ax.set_ylabel("estimated kbits")
            ax.grid(True, alpha=0.3)
            ax.legend()
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, dpi=120)
    except OSError as e:
        raise ArtifactError(f"Cannot write {path}: {e}") from e
    finally:
        plt.close(fig)

    logger.debug(f"Rate plot written to {path}")
    return path
