#!/usr/bin/env python3
"""Small tour: analyze a torus grid, color a wheel, and run one annulus instance."""

from __future__ import annotations

from dataclasses import dataclass

from fivelist import generators as gen
from fivelist.annulus import annulus_color
from fivelist.embedding import edge_width, face_width
from fivelist.charts import fw_star
from fivelist.harness import gen_lists, instances, validate_coloring
from fivelist.thomassen import thomassen_extend


@dataclass(frozen=True)
class DemoConfig:
    torus: tuple = (4, 5)
    wheel: int = 6
    seed: int = 0


def main(cfg: DemoConfig = DemoConfig()) -> None:
    t = gen.torus_grid(*cfg.torus)
    print(f"torus grid {cfg.torus}: g={t.genus} ew={edge_width(t)} fw={face_width(t)} fw*={fw_star(t)}")

    w = gen.wheel(cfg.wheel)
    lists = gen_lists(w, "thomassen", cfg.seed, outer=0).lists
    col = thomassen_extend(w, 0, lists)
    print(f"wheel W{cfg.wheel}: coloring {col} problems={validate_coloring(w, lists, col)}")

    doc = instances("annulus", cfg.seed, 1)[0]
    e = doc.e
    F, F2 = e.faces[doc.outer].walk, e.faces[doc.cfaces[0]].walk
    res = annulus_color(e, F, F2, doc.ppaths[doc.cfaces[0]], doc.precolor, doc.lists)
    print(f"annulus: n={res.n} r={res.r} |V(K)|={len(res.K.vertices)} colored={len(res.psi)} checks={res.checks}")


if __name__ == "__main__":
    main()
