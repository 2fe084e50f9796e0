# Copyright (c) 2025 Benoît Pelletier
# SPDX-License-Identifier: MPL-2.0
# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

from pierce import log

# Named colors accepted in instance metadata (`color.<family>` keys)
known_colors: dict[str, str] = {
    'teal': '#1abc9c', 'green': '#2ecc71', 'blue': '#3498db',
    'purple': '#9b59b6', 'magenta': '#e91e63', 'gold': '#f1c40f',
    'orange': '#e67e22', 'red': '#e74c3c', 'grey': '#95a5a6',
    'gray': '#95a5a6', 'blurple': '#5865f2', 'fuchsia': '#eb459e',
    'yellow': '#fee75c', 'pink': '#ff69b4', 'black': '#000000',
}

# Default colors of families 1 to 6
FAMILY_PALETTE: tuple[str, ...] = ('#3498db', '#e74c3c', '#2ecc71', '#9b59b6', '#e67e22', '#1abc9c')

def str_to_color(color_str: str, default: str = '#5865f2') -> str:
    """Returns a `#rrggbb` color from a known name or a (3 or 6 digit) hex code."""
    color_str = color_str.strip()

    # try named color
    color_name = color_str.lower()
    if color_name in known_colors:
        return known_colors[color_name]

    # try hex code
    hex_str = color_str[1:] if color_str.startswith("#") else color_str
    if len(hex_str) == 3:
        # Expand 3-char hex to 6-char (e.g., "fff" -> "ffffff")
        hex_str = ''.join([c*2 for c in hex_str])
    if len(hex_str) == 6:
        try:
            int(hex_str, 16)
            return f"#{hex_str.lower()}"
        except ValueError:
            pass

    log.warning(f"Invalid color string '{color_str}', using default color ({default}).")
    return default

def family_color(index: int, metadata: dict[str, str] | None = None) -> str:
    """Color of the family at 0-based `index`, overridable by `color.<index+1>` metadata."""
    override = (metadata or {}).get(f"color.{index + 1}")
    if override:
        return str_to_color(override)
    return FAMILY_PALETTE[index % len(FAMILY_PALETTE)]
