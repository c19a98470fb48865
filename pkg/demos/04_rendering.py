"""
Rendering a metro map
=====================

A map is drawn as a DOT digraph and as a standalone SVG. Stops shared by
several lines get a dashed arc between the rows of those lines.
"""
# %%
from pathlib import Path
import tempfile

from armetro import find_interrelations, map_from_json, render_dot, render_svg

metro = map_from_json("""
{"lines": [
  {"stops": ["outlook_overcast", "humidity_normal", "play_yes"]},
  {"stops": ["windy_false", "humidity_normal", "play_yes"]},
  {"stops": ["outlook_sunny", "humidity_high", "play_no"]}
]}
""")

# %%
for ir in find_interrelations(metro):
    print(ir.stop, "is shared by lines", ir.lines)

# %%
print(render_dot(metro))

# %%
out = Path(tempfile.mkdtemp())
(out / "map.svg").write_text(render_svg(metro), encoding="utf-8")
print("wrote", out / "map.svg")
