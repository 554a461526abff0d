# Copyright 2026 The geoqkd Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic atmosphere table and cloud grid shipped in data/.

Both are smooth stand-ins for radiative-transfer exports and satellite cloud
climatologies. Replace them with real data of the same schema for studies.
"""

import argparse
import math
from pathlib import Path

# Vertical optical depth of the clear atmosphere per site and wavelength.
CLEAR_TAU = {
    "rural": {656.448: 0.14, 854.445: 0.085, 1550.027: 0.05},
    "urban": {656.448: 0.29, 854.445: 0.19, 1550.027: 0.10},
    "coastal": {656.448: 0.60, 854.445: 0.50, 1550.027: 0.38},
}
# Midpoints of the two thinnest cloud optical-thickness bins.
CLOUD_TAU = {"clear": 0.0, "thin": 0.65, "thick": 2.45}
ZENITHS = range(0, 81, 5)


def atmosphere_rows():
    for site, per_wl in CLEAR_TAU.items():
        for wl, tau in per_wl.items():
            for regime, cot in CLOUD_TAU.items():
                for z in ZENITHS:
                    eta = math.exp(-(tau + cot) / math.cos(math.radians(z)))
                    yield f"{site},{wl},{regime},{z},{eta:.10g}"


def cloud_rows(lat_min=35, lat_max=65, lon_min=-12, lon_max=30):
    for lat in range(lat_min, lat_max + 1):
        for lon in range(lon_min, lon_max + 1):
            north = (lat - lat_min) / (lat_max - lat_min)
            east = (lon - lon_min) / (lon_max - lon_min)
            ripple = 0.03 * math.sin(lat / 3.0) * math.cos(lon / 4.0)
            f_clear = 0.55 - 0.30 * north + 0.08 * east + ripple
            f_thin = 0.10 + 0.05 * north
            f_thick = 0.10 + 0.06 * north
            yield f"{lat},{lon},{f_clear:.4f},{f_thin:.4f},{f_thick:.4f}"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    with open(args.out / "atmosphere.csv", "w") as f:
        f.write("# geoqkd atmosphere table, schema v1\n")
        f.write("# Synthetic: eta = exp(-(tau_site + cot) sec(theta)); see tools/make_synthetic_data.py\n")
        f.write("site,wavelength_nm,cloud_regime,zenith_deg,transmission\n")
        for row in atmosphere_rows():
            f.write(row + "\n")

    with open(args.out / "cloud_grid_europe.csv", "w") as f:
        f.write("# geoqkd cloud grid, schema v1\n")
        f.write("# Synthetic 1 deg climatology; clear sky thins toward the north and west.\n")
        f.write("lat,lon,f_clear,f_thin,f_thick\n")
        for row in cloud_rows():
            f.write(row + "\n")


if __name__ == "__main__":
    main()
