#!/usr/bin/env python3
# Copyright 2026 The vmh Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes data/sample_corpus.jsonl and tests/fixtures/corpus32.jsonl.

The triplets are hand-written. Positives are restructured paraphrases,
negatives keep the base structure and flip its meaning.
"""
import json
import sys
from pathlib import Path

C, G = "Collected", "Generated"

TRIPLETS = {
    "WordSwap": [
        ("The only industry in the town is light farming on the small rice paddies.",
         "Light farming on the small rice paddies is the only industry in the town.",
         "The light industry in the town is only farming on the small rice paddies.", C),
        ("The dog chased the cat across the garden before dinner.",
         "Before dinner, the cat was pursued through the garden by the dog.",
         "The cat chased the dog across the garden before dinner.", C),
        ("Maria sent a long letter to her brother in Lisbon.",
         "Her brother in Lisbon received a lengthy letter from Maria.",
         "Her brother sent a long letter to Maria in Lisbon.", C),
        ("The red car was parked behind the blue truck.",
         "Behind the blue truck stood the parked red car.",
         "The blue car was parked behind the red truck.", C),
        ("The teacher thanked the students for their patience.",
         "The students were thanked by the teacher for being patient.",
         "The students thanked the teacher for their patience.", C),
    ],
    "ObjSub": [
        ("Carl borrowed a book from Richard, but the book was unreadable to him.",
         "Carl was unable to make sense of the book he borrowed from Richard.",
         "Carl borrowed a book from Richard , but the book was unreadable to Richard.", C),
        ("The museum in Paris displays paintings by Monet.",
         "Paintings by Monet are on display at a Paris museum.",
         "The museum in Berlin displays paintings by Monet.", C),
        ("She poured the milk into a glass jar.",
         "The milk was poured by her into a jar made of glass.",
         "She poured the milk into a glass bowl.", C),
        ("The committee approved the budget for the new hospital.",
         "Funding for the new hospital was approved by the committee.",
         "The committee approved the budget for the new stadium.", C),
        ("Tom gave his old guitar to his sister last summer.",
         "Last summer, Tom's sister received his old guitar as a gift.",
         "Tom gave his old guitar to his neighbor last summer.", C),
    ],
    "ActSub": [
        ("I think we know what we 're going to speak about.",
         "I believe we are aware of what to discuss.",
         "I think we be what we 're going to speak about.", C),
        ("The children built a sandcastle on the beach.",
         "A sandcastle on the beach was made by the children.",
         "The children destroyed a sandcastle on the beach.", C),
        ("The company hired two hundred workers last year.",
         "Last year, two hundred new employees joined the company.",
         "The company fired two hundred workers last year.", C),
        ("He opened the window to let in fresh air.",
         "To get some fresh air inside, he opened up the window.",
         "He closed the window to let in fresh air.", C),
        ("The river floods the valley every spring.",
         "Every spring, the valley is flooded by the river.",
         "The river drains the valley every spring.", C),
    ],
    "NegaExp": [
        ("I appreciate it, that is good to know.",
         "It is a pleasure to know that.",
         "I do not appreciate it, that is good to know.", C),
        ("But it is Jackie saying it so sorta disappointing.",
         "Jackie saying it makes it somewhat disappointing.",
         "But it is Jackie saying it so sorta upbeat.", C),
        ("The hotel staff were friendly and helpful during our stay.",
         "During our stay, we found the people working at the hotel kind and supportive.",
         "The hotel staff were not friendly and helpful during our stay.", C),
        ("The new policy was widely popular among farmers.",
         "Farmers broadly welcomed the new policy.",
         "The new policy was widely unpopular among farmers.", C),
        ("She finished the marathon easily.",
         "Completing the marathon was effortless for her.",
         "She finished the marathon slowly.", C),
    ],
    "WordDel": [
        ("In 2012, Jordan started all 16 games while recording 8.0 sacks and 54 tackles.",
         "In 2012, jordan started 16 games and recorded 8.0 sacks and 54 tackles.",
         "Jordan started all 16 games while recording 8.0 sacks and 54 tackles.", C),
        ("The bridge was closed for two weeks after the storm.",
         "After the storm, the bridge remained shut for a fortnight.",
         "The bridge was closed after the storm.", C),
        ("Only registered members may use the swimming pool on weekends.",
         "On weekends, the swimming pool is reserved for registered members.",
         "Members may use the swimming pool on weekends.", C),
        ("The vaccine was approved for children over five years old.",
         "Children older than five can now receive the approved vaccine.",
         "The vaccine was approved for children.", C),
        ("He rarely drinks coffee in the evening.",
         "Drinking coffee in the evening is something he seldom does.",
         "He drinks coffee in the evening.", C),
    ],
    "QuantSub": [
        ("In 1865, an open sewer system replaced the underground sewers.",
         "An open sewer system replaced underground sewers in 1865.",
         "In 3016 , an open sewer system replaced the underground sewers.", G),
        ("The library holds about 120000 books in its main hall.",
         "Roughly 120000 volumes are kept in the main hall of the library.",
         "The library holds about 67385 books in its main hall.", G),
        ("The train departs at 7 and arrives 45 minutes later.",
         "Leaving at 7, the train reaches its destination 45 minutes afterward.",
         "The train departs at 11 and arrives 45 minutes later.", G),
        ("The tower is 324 meters tall and was completed in 1889.",
         "Completed in 1889, the tower reaches a height of 324 meters.",
         "The tower is 512 meters tall and was completed in 1889.", G),
        ("She scored 8.5 points in the final round.",
         "In the last round, her score was 8.5 points.",
         "She scored 13.2 points in the final round.", G),
    ],
    "ErrTrans": [
        ("The second series was well received by the critics better than the first.",
         "The critics received the second series more favorably than the first.",
         "The first series was recorded by critics better than the second.", C),
        ("The mayor promised to lower taxes before the election.",
         "Before the election, the mayor pledged a reduction in taxes.",
         "The mayor promised to raise taxes after the election.", C),
        ("Most of the guests left the party early because of the rain.",
         "Because it rained, the majority of guests departed the party early.",
         "Some of the guests came to the party late because of the rain.", C),
        ("The doctor advised him to rest for a week.",
         "He was told by the doctor to take a week of rest.",
         "The doctor forbade him to rest for a week.", C),
        ("The film was praised for its music but criticized for its length.",
         "Critics liked the soundtrack of the film but disliked how long it was.",
         "The film was criticized for its music but praised for its length.", C),
    ],
    "ErrNli": [
        ("The sewing machine was built in 1804.",
         "In 1804 , a sewing machine was built by the Englishmen Thomas Stone and James Henderson , and a machine for embroidering was constructed by John Duncan in Scotland.",
         "In 1804, an invention was built by Englishmen Thomas Stone and James Henderson, and a device for embroidering was constructed by John Duncan in Scotland.", G),
        ("Marie Curie won a Nobel Prize in chemistry.",
         "In 1911, Marie Curie was awarded the Nobel Prize in chemistry for her discovery of radium and polonium, making her the first person to win the prize twice.",
         "In 1911, Marie Curie was recognized for her discovery of radium and polonium, making her the first person to be honored twice.", G),
        ("The Amazon river flows into the Atlantic Ocean.",
         "Rising in the Andes, the Amazon river crosses Brazil and flows into the Atlantic Ocean near the city of Belem.",
         "Rising in the Andes, the Amazon river crosses Brazil and ends near the city of Belem.", G),
        ("The castle was destroyed by a fire.",
         "Built in the twelfth century, the castle was destroyed by a fire in 1540 and was never rebuilt by its owners.",
         "Built in the twelfth century, the castle was abandoned in 1540 and was never rebuilt by its owners.", G),
        ("Penguins cannot fly.",
         "Although penguins cannot fly, they are excellent swimmers and use their wings as flippers to move quickly through the water.",
         "Penguins are excellent swimmers and use their wings as flippers to move quickly through the water.", G),
    ],
}

SHORT = {"WordSwap": "ws", "ObjSub": "os", "ActSub": "as", "NegaExp": "ne",
         "WordDel": "wd", "QuantSub": "qs", "ErrTrans": "et", "ErrNli": "en"}


def record(cat, i, t):
    base, pos, neg, neg_src = t
    pos_src = C if cat == "ErrNli" else G
    return {"id": f"{SHORT[cat]}-{i + 1:02d}", "category": cat,
            "base": {"text": base, "source": C},
            "positive": {"text": pos, "source": pos_src},
            "negative": {"text": neg, "source": neg_src}}


def write(path, name, per_cat):
    rows = [record(cat, i, t) for cat, ts in TRIPLETS.items() for i, t in enumerate(ts[:per_cat])]
    comp = {cat: min(per_cat, len(ts)) for cat, ts in TRIPLETS.items()}
    header = {"corpus": {"name": name, "seed": None, "transformed": False,
                         "composition": comp, "unpaired": [], "displaced": []}}
    with open(path, "w", encoding="utf-8") as f:
        for obj in [header] + rows:
            f.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    root = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
    write(root / "data/sample_corpus.jsonl", "sample", 5)
    write(root / "tests/fixtures/corpus32.jsonl", "fixture32", 4)
