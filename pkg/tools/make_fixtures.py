#!/usr/bin/env python3
"""Regenerate the committed test fixtures (ontology + SEPT documents).

Run from the repo root:  python3 tools/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


# -- ontology -----------------------------------------------------------------

def concept(cid, name, parent=None, senses=(), visual=False, attr=None):
    out = {"id": cid, "name": name, "map_lex": list(senses), "is_visual": visual}
    if parent:
        out["parent"] = parent
    if attr:
        out["attribute_kind"] = attr
    return out


def build_ontology():
    c = concept
    return [
        # -- Work -------------------------------------------------------------
        c("work", "Work"),
        c("work.creation", "Creation", "work"),
        c("work.creation.authorship", "Authorship", "work.creation", ["write%2:36:03::"]),
        c("work.creation.performance", "Performance", "work.creation", ["perform%2:36:01::"]),
        c("work.creation.painting", "Painting", "work.creation", ["paint%2:36:00::"]),
        c("work.creation.composition", "Composition", "work.creation"),
        c("work.creation.invention", "Invention", "work.creation"),
        c("work.profession", "Profession", "work"),
        c("work.profession.acting", "Acting", "work.profession"),
        c("work.profession.teaching", "Teaching", "work.profession", ["teach%2:32:00::"]),
        c("work.profession.medicine", "Medicine", "work.profession"),
        c("work.profession.law", "Law", "work.profession"),
        c("work.profession.science", "Science", "work.profession"),
        c("work.profession.science.physics", "Physics", "work.profession.science"),
        c("work.profession.science.chemistry", "Chemistry", "work.profession.science"),
        c("work.profession.science.astronomy", "Astronomy", "work.profession.science"),
        c("work.livelihood", "Livelihood", "work", ["earn%2:40:01::", "living%1:26:00::"]),
        c("work.oeuvre", "Oeuvre", "work", ["work%1:06:01::", "be%2:42:03::"]),
        c("work.oeuvre.literary", "LiteraryWork", "work.oeuvre", ["literature%1:10:00::"]),
        c("work.oeuvre.literary.play", "Play", "work.oeuvre.literary", ["play%1:10:01::"], visual=True),
        c("work.oeuvre.literary.poem", "Poem", "work.oeuvre.literary", ["poem%1:10:00::"], visual=True),
        c("work.oeuvre.literary.book", "Book", "work.oeuvre.literary", ["book%1:10:00::"], visual=True),
        c("work.oeuvre.artwork", "Artwork", "work.oeuvre", ["picture%1:06:00::"], visual=True),
        c("work.oeuvre.theory", "Theory", "work.oeuvre", ["theory%1:09:00::"]),
        c("work.achievement", "Achievement", "work"),
        c("work.achievement.award", "Award", "work.achievement", ["award%1:10:00::"], visual=True),
        c("work.achievement.discovery", "Discovery", "work.achievement", ["discover%2:31:01::"]),
        c("work.institution", "Institution", "work"),
        c("work.institution.university", "University", "work.institution", ["university%1:14:00::"], visual=True),
        c("work.institution.academy", "Academy", "work.institution", ["academy%1:14:00::"], visual=True),
        c("work.institution.theatre", "Theatre", "work.institution", visual=True),
        # -- Personal Life ------------------------------------------------------
        c("personal_life", "Personal Life"),
        c("personal_life.birth", "Birth", "personal_life", ["born%2:29:01::"]),
        c("personal_life.death", "Death", "personal_life", ["die%2:39:00::"]),
        c("personal_life.family", "Family", "personal_life", ["have%2:40:00::"]),
        c("personal_life.family.children", "Children", "personal_life.family", ["child%1:18:00::"], visual=True),
        c("personal_life.family.marriage", "Marriage", "personal_life.family"),
        c("personal_life.family.parents", "Parents", "personal_life.family"),
        c("personal_life.residence", "Residence", "personal_life", ["live%2:42:08::"]),
        c("personal_life.residence.dwelling", "Dwelling", "personal_life.residence", visual=True),
        c("personal_life.person", "Person", "personal_life",
          ["shakespeare%1:18:00::", "ali%1:18:00::", "newton%1:18:00::"], visual=True),
        c("personal_life.person.friend", "Friend", "personal_life.person", ["friend%1:18:00::"], visual=True),
        c("personal_life.person.man", "Man", "personal_life.person", visual=True),
        c("personal_life.person.woman", "Woman", "personal_life.person", visual=True),
        c("personal_life.place", "Place", "personal_life"),
        c("personal_life.place.settlement", "Settlement", "personal_life.place"),
        c("personal_life.place.settlement.town", "Town", "personal_life.place.settlement",
          ["stratford%1:15:00::"], visual=True),
        c("personal_life.place.settlement.city", "City", "personal_life.place.settlement",
          ["london%1:15:00::", "cambridge%1:15:01::", "paris%1:15:00::"], visual=True),
        c("personal_life.place.settlement.village", "Village", "personal_life.place.settlement", visual=True),
        c("personal_life.place.building", "Building", "personal_life.place", ["restaurant%1:06:00::"], visual=True),
        c("personal_life.place.country", "Country", "personal_life.place", visual=True),
        c("personal_life.place.region", "Region", "personal_life.place"),
        c("personal_life.time", "Time", "personal_life"),
        c("personal_life.time.date", "Date", "personal_life.time"),
        c("personal_life.time.year", "Year", "personal_life.time",
          ["1564%1:28:00::", "1642%1:28:00::", "1727%1:28:00::"]),
        c("personal_life.time.month", "Month", "personal_life.time",
          ["december%1:28:00::", "march%1:28:01::"]),
        c("personal_life.education", "Education", "personal_life"),
        c("personal_life.education.study", "Study", "personal_life.education", ["study%2:31:00::"]),
        c("personal_life.social", "Social", "personal_life"),
        c("personal_life.social.meeting", "Meeting", "personal_life.social", ["meet%2:41:00::"]),
        c("personal_life.social.visit", "Visit", "personal_life.social", ["visit%2:38:00::"]),
        c("personal_life.state", "State", "personal_life", ["be%2:42:00::"]),
        c("personal_life.state.hunger", "Hunger", "personal_life.state", ["hungry%3:00:00::"]),
        c("personal_life.food", "Food", "personal_life"),
        c("personal_life.food.sandwich", "Sandwich", "personal_life.food", ["sandwich%1:13:00::"], visual=True),
        c("personal_life.food.meal", "Meal", "personal_life.food", visual=True),
        c("personal_life.food.eating", "Eating", "personal_life.food", ["eat%2:34:00::"]),
        c("personal_life.description", "Description", "personal_life"),
        c("personal_life.description.color", "Color", "personal_life.description",
          ["red%3:00:00::"], attr="color"),
        c("personal_life.description.size", "Size", "personal_life.description",
          ["small%3:00:00::"], attr="size"),
        c("personal_life.description.quality", "Quality", "personal_life.description",
          ["good%3:00:01::", "great%3:00:00::"], attr="quality"),
        c("personal_life.description.age", "Age", "personal_life.description",
          ["old%3:00:02::"], attr="age"),
        c("personal_life.object", "Object", "personal_life"),
        c("personal_life.object.toy", "Toy", "personal_life.object", visual=True),
        c("personal_life.object.toy.ball", "Ball", "personal_life.object.toy",
          ["ball%1:06:00::"], visual=True),
        c("personal_life.health", "Health", "personal_life"),
        # -- Political Life -----------------------------------------------------
        c("political_life", "Political Life"),
        c("political_life.royalty", "Royalty", "political_life"),
        c("political_life.royalty.monarch", "Monarch", "political_life.royalty",
          ["queen%1:18:02::", "king%1:18:01::"], visual=True),
        c("political_life.royalty.court", "Court", "political_life.royalty"),
        c("political_life.government", "Government", "political_life"),
        c("political_life.government.president", "President", "political_life.government",
          ["president%1:18:00::"], visual=True),
        c("political_life.government.parliament", "Parliament", "political_life.government"),
        c("political_life.government.election", "Election", "political_life.government"),
        c("political_life.war", "War", "political_life", ["war%1:04:00::"]),
        c("political_life.war.battle", "Battle", "political_life.war", ["fight%2:33:00::"]),
        c("political_life.war.army", "Army", "political_life.war", visual=True),
        c("political_life.leadership", "Leadership", "political_life"),
    ]


# -- SEPT construction ---------------------------------------------------------

class TreeBuilder:
    def __init__(self, statement_index):
        self.statement_index = statement_index
        self.counter = 0
        self.nodes = []

    def _next_id(self):
        self.counter += 1
        return f"s{self.statement_index}_n{self.counter}"

    def terminal(self, label, token, sense=None, referent=None):
        nid = self._next_id()
        node = {"id": nid, "label": label, "token": token}
        if sense:
            node["sense"] = sense
        if referent:
            node["referent"] = list(referent)
        self.nodes.append(node)
        return nid

    def internal(self, label, children):
        nid = self._next_id()
        self.nodes.append({"id": nid, "label": label, "children": children})
        return nid


def sentence(index, build):
    tb = TreeBuilder(index)
    root = build(tb)
    return {"index": index, "root": root, "nodes": tb.nodes}


def simple_clause(tb, subject_np, verb, objects=(), pps=(), predicate=None, label="S"):
    """subject_np: callable(tb) -> node id; verb: (label, token, sense);
    objects: callables; pps: (prep, np callable); predicate: (label, token, sense)."""
    np_id = subject_np(tb)
    vp_children = [tb.terminal(*verb)]
    if predicate:
        vp_children.append(tb.terminal(*predicate))
    for obj in objects:
        vp_children.append(obj(tb))
    for prep, np_builder in pps:
        prep_id = tb.terminal("IN", prep)
        pp_np = np_builder(tb)
        vp_children.append(tb.internal("PP", [prep_id, pp_np]))
    vp_id = tb.internal("VP", vp_children)
    return tb.internal(label, [np_id, vp_id])


def np(*terminals):
    def build(tb):
        return tb.internal("NP", [tb.terminal(*t) for t in terminals])
    return build


def compound(index, first, connector, second):
    tb = TreeBuilder(index)
    ds1 = first(tb)
    conn = tb.terminal("IN", connector)
    ds2 = second(tb)
    root = tb.internal("S", [ds1, conn, ds2])
    return {"index": index, "root": root, "nodes": tb.nodes}


HE = lambda: np(("PRP", "He", None, (1, 1)))
HIS = "PRP$", "His", None, (1, 1)


def shakespeare_document():
    shakespeare = np(("NNP", "Shakespeare", "shakespeare%1:18:00::"))
    septs = [
        sentence(1, lambda tb: simple_clause(
            tb, shakespeare, ("VBD", "lived", "live%2:42:08::"),
            pps=[("in", np(("NNP", "Stratford", "stratford%1:15:00::")))])),
        sentence(2, lambda tb: simple_clause(
            tb, HE(), ("VBD", "was"),
            objects=(), predicate=("VBN", "born", "born%2:29:01::"),
            pps=[("in", np(("NN", "1564", "1564%1:28:00::")))])),
        sentence(3, lambda tb: simple_clause(
            tb, HE(), ("VBD", "had", "have%2:40:00::"),
            objects=[np(("CD", "three"), ("NNS", "children", "child%1:18:00::"))])),
        sentence(4, lambda tb: simple_clause(
            tb, HE(), ("VBD", "wrote", "write%2:36:03::"),
            objects=[np(("JJ", "good", "good%3:00:01::"), ("NNS", "plays", "play%1:10:01::"))])),
        sentence(5, lambda tb: simple_clause(
            tb, HE(), ("VBD", "earned", "earn%2:40:01::"),
            objects=[np(("DT", "a"), ("NN", "living", "living%1:26:00::"))])),
        sentence(6, lambda tb: simple_clause(
            tb, np(HIS, ("NN", "work", "work%1:06:01::")),
            ("VBZ", "is", "be%2:42:03::"),
            objects=[np(("JJ", "great", "great%3:00:00::"),
                        ("NN", "literature", "literature%1:10:00::"))])),
        sentence(7, lambda tb: simple_clause(
            tb, HE(), ("VBD", "performed", "perform%2:36:01::"),
            pps=[("before", np(("DT", "the"), ("NN", "queen", "queen%1:18:02::"))),
                 ("in", np(("NNP", "December", "december%1:28:00::")))])),
    ]
    text = ("Shakespeare lived in Stratford. He was born in 1564. He had three "
            "children. He wrote good plays. He earned a living. His work is great "
            "literature. He performed before the queen in December.")
    return {"septs": septs, "source_text": text}


def ali_document():
    ds1 = lambda tb: simple_clause(
        tb, np(("NNP", "Ali", "ali%1:18:00::")),
        ("VBD", "ate", "eat%2:34:00::"),
        objects=[np(("DT", "the"), ("NN", "sandwich", "sandwich%1:13:00::"))],
        pps=[("in", np(("DT", "the"), ("NN", "restaurant", "restaurant%1:06:00::")))],
        label="DS")
    ds2 = lambda tb: simple_clause(
        tb, np(("PRP", "he", None, (1, 1))),
        ("VBD", "was", "be%2:42:00::"),
        predicate=("JJ", "hungry", "hungry%3:00:00::"),
        label="DS")
    return {
        "septs": [compound(1, ds1, "because", ds2)],
        "source_text": "Ali ate the sandwich in the restaurant because he was hungry.",
    }


def ball_document():
    return {
        "septs": [sentence(1, lambda tb: np(
            ("JJ", "small", "small%3:00:00::"),
            ("JJ", "red", "red%3:00:00::"),
            ("NN", "ball", "ball%1:06:00::"))(tb))],
        "source_text": "small red ball",
    }


def performed_document():
    return {
        "septs": [sentence(1, lambda tb: simple_clause(
            tb, np(("NNP", "Shakespeare", "shakespeare%1:18:00::")),
            ("VBD", "performed", "perform%2:36:01::"),
            pps=[("before", np(("DT", "the"), ("NN", "queen", "queen%1:18:02::"))),
                 ("in", np(("NNP", "December", "december%1:28:00::")))]))],
        "source_text": "Shakespeare performed before the queen in December.",
    }


def biography_document():
    newton = np(("NNP", "Newton", "newton%1:18:00::"))
    him = np(("PRP", "him", None, (1, 1)))
    specs = [
        lambda tb: simple_clause(tb, newton, ("VBD", "lived", "live%2:42:08::"),
                                 pps=[("in", np(("NNP", "London", "london%1:15:00::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "was"),
                                 predicate=("VBN", "born", "born%2:29:01::"),
                                 pps=[("in", np(("NN", "1642", "1642%1:28:00::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "studied", "study%2:31:00::"),
                                 pps=[("at", np(("DT", "the"), ("NN", "university", "university%1:14:00::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "wrote", "write%2:36:03::"),
                                 objects=[np(("JJ", "good", "good%3:00:01::"),
                                             ("NNS", "books", "book%1:10:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "met", "meet%2:41:00::"),
                                 objects=[np(("DT", "the"), ("NN", "queen", "queen%1:18:02::"))],
                                 pps=[("in", np(("NNP", "December", "december%1:28:00::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "had", "have%2:40:00::"),
                                 objects=[np(("NNS", "children", "child%1:18:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "earned", "earn%2:40:01::"),
                                 objects=[np(("DT", "a"), ("NN", "living", "living%1:26:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "discovered", "discover%2:31:01::"),
                                 objects=[np(("DT", "the"), ("NN", "theory", "theory%1:09:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "taught", "teach%2:32:00::"),
                                 pps=[("at", np(("DT", "the"), ("NN", "academy", "academy%1:14:00::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "visited", "visit%2:38:00::"),
                                 objects=[np(("NNP", "Paris", "paris%1:15:00::"))]),
        lambda tb: simple_clause(tb, np(("DT", "The"), ("NN", "king", "king%1:18:01::")),
                                 ("VBD", "met", "meet%2:41:00::"),
                                 objects=[np(("NNP", "Newton", "newton%1:18:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "wrote", "write%2:36:03::"),
                                 objects=[np(("NNS", "poems", "poem%1:10:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "painted", "paint%2:36:00::"),
                                 objects=[np(("NNS", "pictures", "picture%1:06:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "lived", "live%2:42:08::"),
                                 pps=[("in", np(("NNP", "Cambridge", "cambridge%1:15:01::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "fought", "fight%2:33:00::"),
                                 pps=[("in", np(("DT", "the"), ("NN", "war", "war%1:04:00::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "earned", "earn%2:40:01::"),
                                 objects=[np(("NNS", "awards", "award%1:10:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "had", "have%2:40:00::"),
                                 objects=[np(("DT", "a"), ("NN", "friend", "friend%1:18:00::"))]),
        lambda tb: simple_clause(tb, np(("DT", "The"), ("NN", "president", "president%1:18:00::")),
                                 ("VBD", "met", "meet%2:41:00::"),
                                 objects=[him],
                                 pps=[("in", np(("NNP", "March", "march%1:28:01::")))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "studied", "study%2:31:00::"),
                                 objects=[np(("DT", "the"), ("NN", "theory", "theory%1:09:00::"))]),
        lambda tb: simple_clause(tb, HE(), ("VBD", "died", "die%2:39:00::"),
                                 pps=[("in", np(("NN", "1727", "1727%1:28:00::")))]),
    ]
    septs = [sentence(i, spec) for i, spec in enumerate(specs, start=1)]
    return {"septs": septs, "source_text": "Newton biography fixture (20 statements)."}


def manifest():
    queries = [
        "shakespeare", "ali", "newton", "queen", "shakespeare queen", "king",
        "president", "stratford", "london", "cambridge", "paris", "restaurant",
        "sandwich", "good plays", "good books", "poems", "pictures", "children",
        "friend", "awards", "university", "academy", "small red ball",
    ]
    return {q: {"path": f"images/{q.replace(' ', '_')}.png", "width": 96, "height": 96}
            for q in queries}


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "images").mkdir(exist_ok=True)
    outputs = {
        "ontology_historical.json": build_ontology(),
        "shakespeare.sept.json": shakespeare_document(),
        "ali.sept.json": ali_document(),
        "ball.sept.json": ball_document(),
        "performed.sept.json": performed_document(),
        "biography20.sept.json": biography_document(),
        "images/manifest.json": manifest(),
    }
    for name, payload in outputs.items():
        path = FIXTURES / name
        path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
