#!/usr/bin/env python3
"""Regenerates the frozen reference fixtures used by the C++ tests.

Requires numpy, scipy, scikit-image, Pillow and pynrrd. The outputs are
committed; rerun only when a fixture definition changes.
"""
import pathlib

import nrrd
import numpy as np
from PIL import Image
from scipy import ndimage as ndi
from skimage.feature import canny

HERE = pathlib.Path(__file__).resolve().parent


def ramp_int16_volume():
    x, y, z = np.meshgrid(np.arange(100), np.arange(100), np.arange(50), indexing="ij")
    data = ((x * 37 + y * 101 + z * 1009) % 4096 - 2048).astype(np.int16)
    nrrd.write(str(HERE / "nrrd" / "gzip_int16_100x100x50.nrrd"), data,
               header={"encoding": "gzip", "space origin": [0.0, 0.0, 0.0]}, index_order="F")


def canny_inputs():
    yy, xx = np.mgrid[0:100, 0:100].astype(float)
    out = {}
    out["vertical_step"] = np.where(xx < 50, 40, 200)
    t = np.deg2rad(30)
    out["oblique_step"] = np.where((xx - 50) * np.cos(t) + (yy - 50) * np.sin(t) < 0, 30, 220)
    out["disc"] = np.where((xx - 50) ** 2 + (yy - 50) ** 2 <= 25 ** 2, 200, 50)
    rect = np.full((100, 100), 60)
    rect[25:76, 30:71] = 180
    rect[45:56, 45:56] = 100
    out["nested_rectangles"] = rect
    rng = np.random.default_rng(7)
    blob = 20 + 150 * np.exp(-((xx - 35) ** 2 + (yy - 60) ** 2) / (2 * 12 ** 2))
    blob[15:41, 60:86] = 230
    blob += rng.integers(-2, 3, size=blob.shape)
    out["blob_and_square"] = blob
    return {k: np.clip(np.rint(v), 0, 255).astype(np.uint8) for k, v in out.items()}


def reference_edges(img, sigma=1.4, low=0.1, high=0.25):
    f = img.astype(np.float64)
    smoothed = ndi.gaussian_filter(f, sigma, mode="nearest", truncate=3.0)
    mag = np.hypot(ndi.sobel(smoothed, axis=1, mode="nearest"), ndi.sobel(smoothed, axis=0, mode="nearest"))
    top = mag.max()
    return canny(f, sigma=sigma, low_threshold=low * top, high_threshold=high * top, mode="nearest")


def main():
    ramp_int16_volume()
    for name, img in canny_inputs().items():
        Image.fromarray(img, mode="L").save(HERE / "canny" / f"{name}.png")
        edges = reference_edges(img)
        Image.fromarray((edges * 255).astype(np.uint8), mode="L").save(HERE / "canny" / f"{name}_edges.png")
        print(name, int(edges.sum()), "edge pixels")


if __name__ == "__main__":
    main()
