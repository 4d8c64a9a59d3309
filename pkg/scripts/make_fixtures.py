#!/usr/bin/env python3
"""Regenerate the bundled synthetic fixtures: a 3-topic x 10-source snapshot
store, matching topics/qrels files, calibration maps, and matrix configs.

The content is invented but shaped like real provider output. Everything is
deterministic (fixed timestamps, fixed ordering) so the files are stable
under version control. Run from the repository root:

    python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from tasksugg.model import RetrievedDocument, source_for_id  # noqa: E402
from tasksugg.snapshots import SnapshotRecord, SnapshotStore  # noqa: E402

FETCHED_AT = "2025-11-05T12:00:00+00:00"

TOPICS = [
    {
        "topic_id": "T1",
        "text": "low wedding budget",
        "entities": [{"surface": "wedding", "start": 4, "end": 11, "kb_id": "/m/02nqj"}],
    },
    {
        "topic_id": "T2",
        "text": "grow tomatoes indoors",
        "entities": [{"surface": "tomatoes", "start": 5, "end": 13, "kb_id": "/m/07crc"}],
    },
    {
        "topic_id": "T3",
        "text": "learn guitar online",
        "entities": [{"surface": "guitar", "start": 6, "end": 12, "kb_id": "/m/042v_g"}],
    },
]

# Per topic: suggestion strings for QS sources, (title, snippet) pairs for WS,
# document paragraphs for WD, and a how-to article for WH.
QS_DOCS = {
    "T1": {
        "google": [
            "low wedding budget checklist",
            "cheap wedding cake",
            "low wedding budget ideas",
            "buy a used wedding gown",
            "make your own invitations",
            "affordable wedding venues",
        ],
        "bing": [],  # a provider returning an empty suggestion set is valid
        "duckduckgo": [
            "low wedding budget",  # engines echo the query; scoring drops it
            "cheap wedding cake",
            "low wedding budget decorations",
            "simple wedding ceremony ideas",
        ],
    },
    "T2": {
        "google": [
            "grow tomatoes indoors with lights",
            "best soil for indoor tomatoes",
            "indoor tomato watering schedule",
            "cherry tomato varieties for pots",
        ],
        "bing": [
            "grow tomatoes indoors winter",
            "indoor tomato watering schedule",
            "tomato seedling care",
        ],
        "duckduckgo": [
            "grow tomatoes indoors from seed",
            "indoor tomato pollination tricks",
        ],
    },
    "T3": {
        "google": [
            "learn guitar online free",
            "beginner guitar chords chart",
            "guitar practice routine",
            "best online guitar lessons",
        ],
        "bing": [
            "learn guitar online beginner course",
            "guitar tuning basics",
        ],
        "duckduckgo": [
            "learn guitar online app",
            "fingerpicking exercises daily",
            "beginner guitar chords chart",
        ],
    },
}

WS_DOCS = {
    "T1": [
        (
            "Cheap Wedding Cake Ideas",
            "Order a small display cheap wedding cake and serve sheet cake. "
            "Local bakery prices, simple frosting styles.",
            "https://example.com/wedding-cakes",
        ),
        (
            "Affordable Wedding Venues",
            "Compare affordable wedding venues near parks and community halls; "
            "offseason rental discount tips.",
            "https://example.com/venues",
        ),
        (
            "Budget Wedding Flowers",
            "Seasonal budget wedding flowers; grocery store bouquet tricks and "
            "simple centerpiece arrangements.",
            "https://example.com/flowers",
        ),
    ],
    "T2": [
        (
            "Indoor Tomato Growing Guide",
            "Indoor tomato growing needs strong grow lights, steady warmth, "
            "regular feeding and deep containers.",
            "https://example.com/tomatoes-guide",
        ),
        (
            "Best Soil For Indoor Tomatoes",
            "Potting mixes drain fast; best soil blends combine compost with "
            "perlite for container tomatoes.",
            "https://example.com/soil",
        ),
    ],
    "T3": [
        (
            "Best Online Guitar Lessons",
            "Review of best online guitar lessons; structured beginner courses, "
            "chord drills, practice plans.",
            "https://example.com/guitar-lessons",
        ),
        (
            "Beginner Guitar Chords Chart",
            "Printable beginner guitar chords chart with finger positions and "
            "smooth transition exercises.",
            "https://example.com/chords",
        ),
    ],
}

WD_DOCS = {
    "T1": [
        (
            "Planning A Wedding On A Budget",
            "Set spending limits early. Rent a wedding dress instead of buying. "
            "Choose seasonal flowers. Print simple invitations. Hire student "
            "photographers for shorter coverage.\n"
            "Reception costs dominate budgets. Consider afternoon receptions "
            "with light catering menus.",
            "https://example.com/articles/budget-wedding",
        ),
        (
            "Wedding Reception Savings",
            "Book community venues. Serve buffet style dinners. Skip champagne "
            "toasts. Use digital invitations. Borrow decor from recent "
            "weddings.",
            "https://example.com/articles/reception",
        ),
    ],
    "T2": [
        (
            "Container Tomatoes Indoors",
            "Pick compact determinate varieties. Provide sixteen hours of full "
            "spectrum light. Water when topsoil dries. Feed weekly with "
            "balanced fertilizer. Shake flower trusses for pollination.",
            "https://example.com/articles/container-tomatoes",
        ),
    ],
    "T3": [
        (
            "Teaching Yourself Guitar",
            "Start with open chords practice. Follow structured lesson plans. "
            "Record short daily sessions. Learn basic music theory slowly. "
            "Join online jam communities for feedback.",
            "https://example.com/articles/self-taught-guitar",
        ),
    ],
}

WH_DOCS = {
    "T1": (
        "Plan A Cheap Wedding",
        "Draft your guest list first. Choose offpeak wedding dates. Rent a "
        "wedding dress. Bake your own cake with willing relatives. Make your "
        "own invitations with online templates. Decorate with thrifted "
        "candles and string lighting.",
        "https://www.wikihow.com/plan-a-cheap-wedding",
    ),
    "T2": (
        "Grow Tomatoes Inside",
        "Choose dwarf tomato varieties. Start seeds in seed trays. Install "
        "full spectrum grow lights. Transplant seedlings into deep pots. "
        "Hand pollinate open flowers with gentle shaking. Harvest fruits "
        "when fully colored.",
        "https://www.wikihow.com/grow-tomatoes-inside",
    ),
    "T3": (
        "Learn Guitar By Yourself",
        "Buy a playable starter guitar. Tune every string before practice. "
        "Memorize open chord shapes. Practice chord transitions daily. "
        "Follow free lesson videos. Track progress with weekly recordings.",
        "https://www.wikihow.com/learn-guitar-yourself",
    ),
}

QRELS_LINES = [
    # topic subtask grade text  (grade third, rest of line is the suggestion)
    "T1 T1.1 2 cheap wedding cake",
    "T1 T1.1 1 bake your own cake",
    "T1 T1.2 2 make your own invitations",
    "T1 T1.2 1 low wedding budget decorations",
    "T1 T1.3 2 buy a used wedding gown",
    "T1 T1.3 2 rent a wedding dress",
    "T1 T1.4 1 affordable wedding venues",
    "T1 T1.4 0 simple wedding ceremony ideas",
    # the initial query itself was judged relevant; generation removes it
    "T1 T1.4 2 low wedding budget",
    "T2 T2.1 2 install full spectrum grow lights",
    "T2 T2.1 1 grow tomatoes indoors with lights",
    "T2 T2.2 2 best soil for indoor tomatoes",
    "T2 T2.2 1 deep containers",
    "T2 T2.3 2 indoor tomato watering schedule",
    "T2 T2.3 1 water when topsoil dries",
    "T2 T2.4 1 hand pollinate open flowers",
    "T2 T2.4 1 indoor tomato pollination tricks",
    "T3 T3.1 2 beginner guitar chords chart",
    "T3 T3.1 1 memorize open chord shapes",
    "T3 T3.2 2 best online guitar lessons",
    "T3 T3.2 1 follow free lesson videos",
    "T3 T3.3 1 guitar practice routine",
    "T3 T3.3 1 practice chord transitions daily",
    "T3 T3.4 1 guitar tuning basics",
]

CALIBRATION_TYPES = {"QS": 0.40, "WS": 0.30, "WD": 0.20, "WH": 0.10}

CALIBRATION_INDIVIDUAL = {
    "QS_google": 0.42,
    "QS_bing": 0.05,
    "QS_duckduckgo": 0.33,
    "WS_google": 0.35,
    "WS_bing": 0.28,
    "WS_duckduckgo": 0.24,
    "WD_google": 0.22,
    "WD_bing": 0.18,
    "WD_duckduckgo": 0.15,
    "WH": 0.12,
}


def qs_record(topic_id, engine, texts):
    source = source_for_id(f"QS_{engine}")
    docs = tuple(
        RetrievedDocument(
            doc_id=f"{source.source_id}:{rank}",
            source=source,
            rank=rank,
            body=text,
        )
        for rank, text in enumerate(texts, start=1)
    )
    return SnapshotRecord(topic_id, source, FETCHED_AT, docs)


def ws_record(topic_id, engine, rows, offset=0):
    source = source_for_id(f"WS_{engine}")
    rotated = rows[offset:] + rows[:offset]  # engines disagree on ordering
    docs = tuple(
        RetrievedDocument(
            doc_id=f"{source.source_id}:{rank}",
            source=source,
            rank=rank,
            title=title,
            body=snippet,
            url=url,
        )
        for rank, (title, snippet, url) in enumerate(rotated, start=1)
    )
    return SnapshotRecord(topic_id, source, FETCHED_AT, docs)


def wd_record(topic_id, engine, rows, offset=0):
    source = source_for_id(f"WD_{engine}")
    rotated = rows[offset:] + rows[:offset]
    docs = tuple(
        RetrievedDocument(
            doc_id=f"{source.source_id}:{rank}",
            source=source,
            rank=rank,
            title=title,
            body=body,
            url=url,
        )
        for rank, (title, body, url) in enumerate(rotated, start=1)
    )
    return SnapshotRecord(topic_id, source, FETCHED_AT, docs)


def wh_record(topic_id, row):
    source = source_for_id("WH")
    title, body, url = row
    docs = (
        RetrievedDocument(
            doc_id="WH:1", source=source, rank=1, title=title, body=body, url=url
        ),
    )
    return SnapshotRecord(topic_id, source, FETCHED_AT, docs)


def write_store(fixtures: Path) -> None:
    store = SnapshotStore(fixtures / "store")
    for topic in TOPICS:
        tid = topic["topic_id"]
        for engine in ("google", "bing", "duckduckgo"):
            store.save(qs_record(tid, engine, QS_DOCS[tid][engine]))
        for i, engine in enumerate(("google", "bing", "duckduckgo")):
            store.save(ws_record(tid, engine, WS_DOCS[tid], offset=i % len(WS_DOCS[tid])))
        for i, engine in enumerate(("google", "bing", "duckduckgo")):
            store.save(wd_record(tid, engine, WD_DOCS[tid], offset=i % len(WD_DOCS[tid])))
        store.save(wh_record(tid, WH_DOCS[tid]))


def write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", "utf-8")


def matrix_generators():
    cells = [
        {"label": stype, "overrides": {"source_types": [stype]}}
        for stype in ("QS", "WS", "WD", "WH")
    ]
    return {
        "name": "generators",
        "blocks": [
            {"label": "raw", "overrides": {"generation": {"mode": "raw"}}, "cells": cells},
            {
                "label": "expanded",
                "overrides": {"generation": {"mode": "expanded"}},
                "cells": cells,
            },
        ],
    }


def matrix_doc_importance():
    cells = [
        {"label": stype, "overrides": {"source_types": [stype]}}
        for stype in ("QS", "WS", "WD", "WH")
    ]
    return {
        "name": "doc-importance",
        "blocks": [
            {
                "label": "uniform",
                "overrides": {"doc_importance": "uniform"},
                "cells": cells,
            },
            {
                "label": "rank-decay",
                "overrides": {"doc_importance": "rank_decay"},
                "cells": cells,
            },
        ],
    }


def matrix_individual_sources():
    return {
        "name": "individual-sources",
        "sort_by": "err_ia",
        "blocks": [
            {
                "label": "single-source",
                "cells": [
                    {"label": sid, "overrides": {"sources": [sid]}}
                    for sid in CALIBRATION_INDIVIDUAL
                ],
            }
        ],
    }


def matrix_combination():
    return {
        "name": "source-combination",
        "blocks": [
            {
                "label": "all-sources",
                "cells": [
                    {
                        "label": "uniform",
                        "overrides": {"source_weights": {"strategy": "uniform"}},
                    },
                    {
                        "label": "source-type",
                        "overrides": {
                            "source_weights": {
                                "strategy": "source_type_proportional",
                                "calibration_file": "calibration_types.json",
                            }
                        },
                    },
                    {
                        "label": "individual",
                        "overrides": {
                            "source_weights": {
                                "strategy": "individual_proportional",
                                "calibration_file": "calibration_individual.json",
                            }
                        },
                    },
                ],
            }
        ],
    }


def main() -> None:
    fixtures = ROOT / "fixtures"
    fixtures.mkdir(exist_ok=True)
    write_store(fixtures)
    write_json(fixtures / "topics.json", {"topics": TOPICS})
    (fixtures / "qrels.txt").write_text("\n".join(QRELS_LINES) + "\n", "utf-8")
    write_json(fixtures / "calibration_types.json", CALIBRATION_TYPES)
    write_json(fixtures / "calibration_individual.json", CALIBRATION_INDIVIDUAL)
    write_json(fixtures / "config_default.json", {"k": 10, "output_depth": 20})
    write_json(fixtures / "matrix_generators.json", matrix_generators())
    write_json(fixtures / "matrix_doc_importance.json", matrix_doc_importance())
    write_json(fixtures / "matrix_combination.json", matrix_combination())
    write_json(
        fixtures / "matrix_individual_sources.json", matrix_individual_sources()
    )
    print(f"fixtures written under {fixtures}")


if __name__ == "__main__":
    main()
