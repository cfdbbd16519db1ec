#!/usr/bin/env python3
"""Writes the fixture corpus, parse trees and QA-SRL answers.

The trees are hand annotations in the spaCy English scheme (coarse POS,
Penn tag, ClearNLP dependency labels). They stand in for recorded parser
output. Each token row is: text lemma POS TAG dep head [ent], with 1-based
heads and 0 for the root.

Run from the repository root: python3 fixtures/make_fixtures.py
"""

import json
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))

ARTICLES = [
    ("ctenophora", "Ctenophora", ["ctenophora"]),
    ("barychelidae", "Barychelidae", ["barychelidae"]),
    ("pelican", "Pelican", ["pelican"]),
    ("cephalopod", "Cephalopod", ["cephalopod"]),
    ("stenocara_gracilipes", "Stenocara gracilipes", ["stenocara", "stenocara2"]),
    ("yucca", "Yucca", ["yucca"]),
    ("kangaroo_rat", "Kangaroo rat", ["kangaroo_rat"]),
    ("peregrine_falcon", "Peregrine falcon", ["falcon"]),
    ("isopoda", "Isopoda", ["isopoda"]),
    ("pigeon_guillemot", "Pigeon guillemot", ["guillemot"]),
    ("morgan_horse", "Morgan horse", ["morgan"]),
    ("common_hill_myna", "Common hill myna", ["myna"]),
    ("scyliorhinidae", "Scyliorhinidae", ["catshark"]),
    ("common_frog", "Common frog", ["frog"]),
    ("lowered_eyelid", "Lowered eyelid", ["eyelid"]),
    ("species_record", "Species record", ["discovery"]),
    ("gecko", "Gecko", ["gecko"]),
    ("shark", "Shark", ["shark"]),
    ("termite", "Termite", ["termite"]),
]

S = {}
QA = {}

S["ctenophora"] = ("If they enter less dense brackish water, the ciliary rosettes in the "
                   "body cavity may pump this into the mesoglea to increase its bulk and "
                   "decrease its density, to avoid sinking.", """
If if SCONJ IN mark 3
they they PRON PRP nsubj 3
enter enter VERB VBP advcl 17
less less ADV RBR advmod 5
dense dense ADJ JJ amod 7
brackish brackish ADJ JJ amod 7
water water NOUN NN dobj 3
, , PUNCT , punct 17
the the DET DT det 11
ciliary ciliary ADJ JJ amod 11
rosettes rosette NOUN NNS nsubj 17
in in ADP IN prep 11
the the DET DT det 15
body body NOUN NN compound 15
cavity cavity NOUN NN pobj 12
may may AUX MD aux 17
pump pump VERB VB ROOT 0
this this PRON DT dobj 17
into into ADP IN prep 17
the the DET DT det 21
mesoglea mesoglea NOUN NN pobj 19
to to PART TO aux 23
increase increase VERB VB advcl 17
its its PRON PRP$ poss 25
bulk bulk NOUN NN dobj 23
and and CCONJ CC cc 23
decrease decrease VERB VB conj 23
its its PRON PRP$ poss 29
density density NOUN NN dobj 27
, , PUNCT , punct 17
to to PART TO aux 32
avoid avoid VERB VB advcl 17
sinking sink VERB VBG xcomp 32
. . PUNCT . punct 17
""")
QA["ctenophora"] = [
    ("enter", "enter", "What does someone enter?", "less dense brackish water"),
    ("enter", "enter", "Who enters something?", "they"),
    ("pump", "pump", "What might something pump?", "this"),
    ("pump", "pump", "Why might something pump something?", "to avoid sinking"),
    ("increase", "increase", "What does something increase?", "its bulk"),
    ("decrease", "decrease", "What does something decrease?", "its density"),
    ("avoid", "avoid", "What does something avoid?", "sinking"),
]

S["barychelidae"] = ("Others can avoid drowning by trapping air bubbles within the hairs "
                     "covering their bodies.", """
Others others NOUN NNS nsubj 3
can can AUX MD aux 3
avoid avoid VERB VB ROOT 0
drowning drown VERB VBG xcomp 3
by by ADP IN prep 3
trapping trap VERB VBG pcomp 5
air air NOUN NN compound 8
bubbles bubble NOUN NNS dobj 6
within within ADP IN prep 8
the the DET DT det 11
hairs hair NOUN NNS pobj 9
covering cover VERB VBG acl 11
their their PRON PRP$ poss 14
bodies body NOUN NNS dobj 12
. . PUNCT . punct 3
""")
QA["barychelidae"] = [
    ("avoid", "avoid", "What can someone avoid?", "drowning"),
    ("avoid", "avoid", "How can someone avoid something?", "by trapping air bubbles"),
    ("trapping", "trap", "What does someone trap?", "air bubbles"),
    ("covering", "cover", "What covers something?", "the hairs"),
    ("covering", "cover", "What is covered?", "their bodies"),
]

S["pelican"] = ("The air sacs serve to keep the pelican remarkably buoyant in the water and "
                "may also cushion the impact of the pelican's body on the water surface "
                "when they dive from flight into water to catch fish.", """
The the DET DT det 3
air air NOUN NN compound 3
sacs sac NOUN NNS nsubj 4
serve serve VERB VBP ROOT 0
to to PART TO aux 6
keep keep VERB VB xcomp 4
the the DET DT det 8
pelican pelican NOUN NN dobj 6
remarkably remarkably ADV RB advmod 10
buoyant buoyant ADJ JJ oprd 6
in in ADP IN prep 10
the the DET DT det 13
water water NOUN NN pobj 11
and and CCONJ CC cc 4
may may AUX MD aux 17
also also ADV RB advmod 17
cushion cushion VERB VB conj 4
the the DET DT det 19
impact impact NOUN NN dobj 17
of of ADP IN prep 19
the the DET DT det 22
pelican pelican NOUN NN poss 24
's 's PART POS case 22
body body NOUN NN pobj 20
on on ADP IN prep 17
the the DET DT det 28
water water NOUN NN compound 28
surface surface NOUN NN pobj 25
when when SCONJ WRB advmod 31
they they PRON PRP nsubj 31
dive dive VERB VBP advcl 17
from from ADP IN prep 31
flight flight NOUN NN pobj 32
into into ADP IN prep 31
water water NOUN NN pobj 34
to to PART TO aux 37
catch catch VERB VB advcl 31
fish fish NOUN NN dobj 37
. . PUNCT . punct 4
""")
QA["pelican"] = [
    ("keep", "keep", "What does something keep?", "the pelican"),
    ("cushion", "cushion", "What might something cushion?", "the impact of the pelican's body"),
    ("dive", "dive", "Who dives?", "they"),
    ("catch", "catch", "What does someone catch?", "fish"),
]

S["cephalopod"] = ("Other cephalopods use ammonium in a similar way, storing the ions as "
                   "ammonium chloride to reduce their overall density and increase "
                   "buoyancy.", """
Other other ADJ JJ amod 2
cephalopods cephalopod NOUN NNS nsubj 3
use use VERB VBP ROOT 0
ammonium ammonium NOUN NN dobj 3
in in ADP IN prep 3
a a DET DT det 8
similar similar ADJ JJ amod 8
way way NOUN NN pobj 5
, , PUNCT , punct 3
storing store VERB VBG advcl 3
the the DET DT det 12
ions ion NOUN NNS dobj 10
as as ADP IN prep 10
ammonium ammonium NOUN NN compound 15
chloride chloride NOUN NN pobj 13
to to PART TO aux 17
reduce reduce VERB VB advcl 10
their their PRON PRP$ poss 20
overall overall ADJ JJ amod 20
density density NOUN NN dobj 17
and and CCONJ CC cc 17
increase increase VERB VB conj 17
buoyancy buoyancy NOUN NN dobj 22
. . PUNCT . punct 3
""")
QA["cephalopod"] = [
    ("use", "use", "What does something use?", "ammonium"),
    ("storing", "store", "What does something store?", "the ions"),
    ("storing", "store", "Why does something store something?",
     "to reduce their overall density and increase buoyancy"),
    ("reduce", "reduce", "What does something reduce?", "their overall density"),
]

S["stenocara"] = ("Facing into the breeze, with its body angled at 45 degrees, the beetle "
                  "catches fog droplets on its hardened wings.", """
Facing face VERB VBG advcl 16
into into ADP IN prep 1
the the DET DT det 4
breeze breeze NOUN NN pobj 2
, , PUNCT , punct 16
with with ADP IN prep 16
its its PRON PRP$ poss 8
body body NOUN NN pobj 6
angled angle VERB VBN acl 8
at at ADP IN prep 9
45 45 NUM CD nummod 12
degrees degree NOUN NNS pobj 10
, , PUNCT , punct 16
the the DET DT det 15
beetle beetle NOUN NN nsubj 16
catches catch VERB VBZ ROOT 0
fog fog NOUN NN compound 18
droplets droplet NOUN NNS dobj 16
on on ADP IN prep 16
its its PRON PRP$ poss 22
hardened hardened ADJ JJ amod 22
wings wing NOUN NNS pobj 19
. . PUNCT . punct 16
""")
QA["stenocara"] = [
    ("catches", "catch", "What does something catch?", "fog droplets"),
    ("catches", "catch", "Where does something catch something?", "on its hardened wings"),
    ("angled", "angle", "What is angled?", "its body"),
]

S["stenocara2"] = ("The droplets then roll down the beetle's back to its mouth, giving it a "
                   "drink of water in the desert.", """
The the DET DT det 2
droplets droplet NOUN NNS nsubj 4
then then ADV RB advmod 4
roll roll VERB VBP ROOT 0
down down ADP IN prep 4
the the DET DT det 7
beetle beetle NOUN NN poss 9
's 's PART POS case 7
back back NOUN NN pobj 5
to to ADP IN prep 4
its its PRON PRP$ poss 12
mouth mouth NOUN NN pobj 10
, , PUNCT , punct 4
giving give VERB VBG advcl 4
it it PRON PRP dative 14
a a DET DT det 17
drink drink NOUN NN dobj 14
of of ADP IN prep 17
water water NOUN NN pobj 18
in in ADP IN prep 14
the the DET DT det 22
desert desert NOUN NN pobj 20
. . PUNCT . punct 4
""")
QA["stenocara2"] = [
    ("giving", "give", "What does something give?", "a drink of water"),
    ("roll", "roll", "Where does something roll?", "down the beetle's back"),
]

S["yucca"] = ("Some desert plants have an oily coating on their leaves or pads that traps "
              "moisture, thereby reducing water loss.", """
Some some DET DT det 3
desert desert NOUN NN compound 3
plants plant NOUN NNS nsubj 4
have have VERB VBP ROOT 0
an an DET DT det 7
oily oily ADJ JJ amod 7
coating coating NOUN NN dobj 4
on on ADP IN prep 7
their their PRON PRP$ poss 10
leaves leaf NOUN NNS pobj 8
or or CCONJ CC cc 10
pads pad NOUN NNS conj 10
that that PRON WDT nsubj 14
traps trap NOUN NNS relcl 7
moisture moisture NOUN NN dobj 14
, , PUNCT , punct 14
thereby thereby ADV RB advmod 18
reducing reduce VERB VBG advcl 14
water water NOUN NN compound 20
loss loss NOUN NN dobj 18
. . PUNCT . punct 4
""")
QA["yucca"] = [
    ("have", "have", "What does something have?", "an oily coating"),
    ("traps", "trap", "What traps something?", "an oily coating"),
    ("traps", "trap", "What does something trap?", "moisture"),
    ("reducing", "reduce", "What does something reduce?", "water loss"),
]

S["kangaroo_rat"] = ("To reduce loss of moisture through respiration when sleeping, a "
                     "kangaroo rat buries its nose in its fur to accumulate a small pocket "
                     "of moist air.", """
To to PART TO aux 2
reduce reduce VERB VB advcl 14
loss loss NOUN NN dobj 2
of of ADP IN prep 3
moisture moisture NOUN NN pobj 4
through through ADP IN prep 2
respiration respiration NOUN NN pobj 6
when when SCONJ WRB advmod 9
sleeping sleep VERB VBG advcl 2
, , PUNCT , punct 14
a a DET DT det 13
kangaroo kangaroo NOUN NN compound 13
rat rat NOUN NN nsubj 14
buries bury VERB VBZ ROOT 0
its its PRON PRP$ poss 16
nose nose NOUN NN dobj 14
in in ADP IN prep 14
its its PRON PRP$ poss 19
fur fur NOUN NN pobj 17
to to PART TO aux 21
accumulate accumulate VERB VB advcl 14
a a DET DT det 24
small small ADJ JJ amod 24
pocket pocket NOUN NN dobj 21
of of ADP IN prep 24
moist moist ADJ JJ amod 27
air air NOUN NN pobj 25
. . PUNCT . punct 14
""")
QA["kangaroo_rat"] = [
    ("reduce", "reduce", "What does something reduce?", "loss of moisture"),
    ("buries", "bury", "What does something bury?", "its nose"),
    ("accumulate", "accumulate", "What does something accumulate?",
     "a small pocket of moist air"),
    ("sleeping", "sleep", "When does something sleep?", "when sleeping"),
]

S["falcon"] = ("The air pressure from such a dive could possibly damage a bird's lungs, but "
               "small bony tubercles on a falcon's nostrils guide the powerful airflow away "
               "from the nostrils, enabling the bird to breathe more easily while diving by "
               "reducing the change in air pressure.", """
The the DET DT det 3
air air NOUN NN compound 3
pressure pressure NOUN NN nsubj 10
from from ADP IN prep 3
such such DET PDT predet 7
a a DET DT det 7
dive dive NOUN NN pobj 4
could could AUX MD aux 10
possibly possibly ADV RB advmod 10
damage damage VERB VB ROOT 0
a a DET DT det 12
bird bird NOUN NN poss 14
's 's PART POS case 12
lungs lung NOUN NNS dobj 10
, , PUNCT , punct 10
but but CCONJ CC cc 10
small small ADJ JJ amod 19
bony bony ADJ JJ amod 19
tubercles tubercle NOUN NNS nsubj 25
on on ADP IN prep 19
a a DET DT det 22
falcon falcon NOUN NN poss 24
's 's PART POS case 22
nostrils nostril NOUN NNS pobj 20
guide guide VERB VBP conj 10
the the DET DT det 28
powerful powerful ADJ JJ amod 28
airflow airflow NOUN NN dobj 25
away away ADV RB advmod 25
from from ADP IN prep 29
the the DET DT det 32
nostrils nostril NOUN NNS pobj 30
, , PUNCT , punct 25
enabling enable VERB VBG advcl 25
the the DET DT det 36
bird bird NOUN NN dobj 34
to to PART TO aux 38
breathe breathe VERB VB xcomp 34
more more ADV RBR advmod 40
easily easily ADV RB advmod 38
while while SCONJ IN mark 42
diving dive VERB VBG advcl 38
by by ADP IN prep 42
reducing reduce VERB VBG pcomp 43
the the DET DT det 46
change change NOUN NN dobj 44
in in ADP IN prep 46
air air NOUN NN compound 49
pressure pressure NOUN NN pobj 47
. . PUNCT . punct 10
""")
QA["falcon"] = [
    ("damage", "damage", "What could damage something?", "The air pressure from such a dive"),
    ("damage", "damage", "What could something damage?", "a bird's lungs"),
    ("guide", "guide", "What guides something?",
     "small bony tubercles on a falcon's nostrils"),
    ("guide", "guide", "What does something guide?", "the powerful airflow"),
    ("enabling", "enable", "What does something enable?", "the bird to breathe more easily"),
    ("reducing", "reduce", "What reduces something?", "the bird"),
    ("reducing", "reduce", "What is being reduced?", "the change in air pressure"),
]

S["isopoda"] = ("The dorsal (upper) surface of the animal is covered by a series of "
                "overlapping, articulated plates which give protection while also providing "
                "flexibility.", """
The the DET DT det 6
dorsal dorsal ADJ JJ amod 6
( ( PUNCT -LRB- punct 4
upper upper ADJ JJ amod 6
) ) PUNCT -RRB- punct 4
surface surface NOUN NN nsubjpass 11
of of ADP IN prep 6
the the DET DT det 9
animal animal NOUN NN pobj 7
is be AUX VBZ auxpass 11
covered cover VERB VBN ROOT 0
by by ADP IN agent 11
a a DET DT det 14
series series NOUN NN pobj 12
of of ADP IN prep 14
overlapping overlap VERB VBG amod 19
, , PUNCT , punct 19
articulated articulate VERB VBN amod 19
plates plate NOUN NNS pobj 15
which which PRON WDT nsubj 21
give give VERB VBP relcl 19
protection protection NOUN NN dobj 21
while while SCONJ IN mark 25
also also ADV RB advmod 25
providing provide VERB VBG advcl 21
flexibility flexibility NOUN NN dobj 25
. . PUNCT . punct 11
""")
QA["isopoda"] = [
    ("covered", "cover", "What is covered?", "The dorsal (upper) surface of the animal"),
    ("give", "give", "What gives something?", "overlapping, articulated plates"),
    ("give", "give", "What does something give?", "protection"),
    ("providing", "provide", "What does something provide?", "flexibility"),
]

S["guillemot"] = ("Trills can be performed singly or as duets between pairs; if performed as "
                  "a duet then the call also functions to help reinforce pair bond.", """
Trills trill NOUN NNS nsubjpass 4
can can AUX MD aux 4
be be AUX VB auxpass 4
performed perform VERB VBN ROOT 0
singly singly ADV RB advmod 4
or or CCONJ CC cc 5
as as ADP IN prep 4
duets duet NOUN NNS pobj 7
between between ADP IN prep 8
pairs pair NOUN NNS pobj 9
; ; PUNCT : punct 4
if if SCONJ IN mark 13
performed perform VERB VBN advcl 21
as as ADP IN prep 13
a a DET DT det 16
duet duet NOUN NN pobj 14
then then ADV RB advmod 21
the the DET DT det 19
call call NOUN NN nsubj 21
also also ADV RB advmod 21
functions function VERB VBZ parataxis 4
to to PART TO aux 23
help help VERB VB xcomp 21
reinforce reinforce VERB VB xcomp 23
pair pair NOUN NN compound 26
bond bond NOUN NN dobj 24
. . PUNCT . punct 4
""")
QA["guillemot"] = [
    ("performed", "perform", "What can be performed?", "Trills"),
    ("reinforce", "reinforce", "What does something reinforce?", "pair bond"),
    ("functions", "function", "What functions?", "the call"),
]

S["morgan"] = ("By the 1870s, however, longer-legged horses came into fashion, and Morgan "
               "horses were crossed with those of other breeds.", """
By by ADP IN prep 9
the the DET DT det 3 DATE
1870s 1870s NUM CD pobj 1 DATE
, , PUNCT , punct 9
however however ADV RB advmod 9
, , PUNCT , punct 9
longer-legged longer-legged ADJ JJ amod 8
horses horse NOUN NNS nsubj 9
came come VERB VBD ROOT 0
into into ADP IN prep 9
fashion fashion NOUN NN pobj 10
, , PUNCT , punct 9
and and CCONJ CC cc 9
Morgan Morgan PROPN NNP compound 15
horses horse NOUN NNS nsubjpass 17
were be AUX VBD auxpass 17
crossed cross VERB VBN conj 9
with with ADP IN prep 17
those those PRON DT pobj 18
of of ADP IN prep 19
other other ADJ JJ amod 22
breeds breed NOUN NNS pobj 20
. . PUNCT . punct 9
""")
QA["morgan"] = [
    ("came", "come", "What came into something?", "longer-legged horses"),
    ("came", "come", "When did something come into something?", "By the 1870s"),
    ("crossed", "cross", "What were crossed?", "Morgan horses"),
]

S["myna"] = ("It is a member of the starling family (Sturnidae), resident in hill regions "
             "of South Asia and Southeast Asia.", """
It it PRON PRP nsubj 2
is be AUX VBZ ROOT 0
a a DET DT det 4
member member NOUN NN attr 2
of of ADP IN prep 4
the the DET DT det 8
starling starling NOUN NN compound 8
family family NOUN NN pobj 5
( ( PUNCT -LRB- punct 10
Sturnidae Sturnidae PROPN NNP appos 8
) ) PUNCT -RRB- punct 10
, , PUNCT , punct 4
resident resident ADJ JJ acl 4
in in ADP IN prep 13
hill hill NOUN NN compound 16
regions region NOUN NNS pobj 14
of of ADP IN prep 16
South South PROPN NNP compound 19 LOC
Asia Asia PROPN NNP pobj 17 LOC
and and CCONJ CC cc 19
Southeast Southeast PROPN NNP compound 22 LOC
Asia Asia PROPN NNP conj 19 LOC
. . PUNCT . punct 2
""")
QA["myna"] = []

S["catshark"] = ("However, as with most other sharks, including other members of the family "
                 "Scyliorhinidae, they are believed to have a well-developed sense of smell, "
                 "and are electroreceptive, which allows them to detect electricity emitted "
                 "by other animals, and may also allow them to detect magnetic fields, which "
                 "aids in navigation.", """
However however ADV RB advmod 19
, , PUNCT , punct 19
as as ADP IN prep 19
with with ADP IN prep 3
most most ADJ JJS amod 7
other other ADJ JJ amod 7
sharks shark NOUN NNS pobj 4
, , PUNCT , punct 7
including include VERB VBG prep 7
other other ADJ JJ amod 11
members member NOUN NNS pobj 9
of of ADP IN prep 11
the the DET DT det 14
family family NOUN NN pobj 12
Scyliorhinidae Scyliorhinidae PROPN NNP appos 14
, , PUNCT , punct 19
they they PRON PRP nsubjpass 19
are be AUX VBP auxpass 19
believed believe VERB VBN ROOT 0
to to PART TO aux 21
have have VERB VB xcomp 19
a a DET DT det 24
well-developed well-developed ADJ JJ amod 24
sense sense NOUN NN dobj 21
of of ADP IN prep 24
smell smell NOUN NN pobj 25
, , PUNCT , punct 19
and and CCONJ CC cc 19
are be AUX VBP conj 19
electroreceptive electroreceptive ADJ JJ acomp 29
, , PUNCT , punct 30
which which PRON WDT nsubj 33
allows allow VERB VBZ relcl 30
them they PRON PRP nsubj 36
to to PART TO aux 36
detect detect VERB VB ccomp 33
electricity electricity NOUN NN dobj 36
emitted emit VERB VBN acl 37
by by ADP IN agent 38
other other ADJ JJ amod 41
animals animal NOUN NNS pobj 39
, , PUNCT , punct 33
and and CCONJ CC cc 33
may may AUX MD aux 46
also also ADV RB advmod 46
allow allow VERB VB conj 33
them they PRON PRP nsubj 49
to to PART TO aux 49
detect detect VERB VB ccomp 46
magnetic magnetic ADJ JJ amod 51
fields field NOUN NNS dobj 49
, , PUNCT , punct 51
which which PRON WDT nsubj 54
aids aid VERB VBZ relcl 51
in in ADP IN prep 54
navigation navigation NOUN NN pobj 55
. . PUNCT . punct 19
""")
QA["catshark"] = [
    ("emitted", "emit", "what is emitted?", "electricity"),
    ("allows", "allow", "what does something allow?",
     "to detect electricity emitted by other animals"),
    ("detect", "detect", "Who detects something?", "them"),
    ("detect", "detect", "what is being detected?", "magnetic fields"),
    ("detect", "detect", "what does something detect?", "electricity emitted by other animals"),
    ("aids", "aid", "what does something aid?", "in navigation"),
]

S["frog"] = ("The webbing between the toes increases the area of the foot and helps propel "
             "the frog powerfully through the water.", """
The the DET DT det 2
webbing webbing NOUN NN nsubj 6
between between ADP IN prep 2
the the DET DT det 5
toes toe NOUN NNS pobj 3
increases increase VERB VBZ ROOT 0
the the DET DT det 8
area area NOUN NN dobj 6
of of ADP IN prep 8
the the DET DT det 11
foot foot NOUN NN pobj 9
and and CCONJ CC cc 6
helps help VERB VBZ conj 6
propel propel VERB VB xcomp 13
the the DET DT det 16
frog frog NOUN NN dobj 14
powerfully powerfully ADV RB advmod 14
through through ADP IN prep 14
the the DET DT det 20
water water NOUN NN pobj 18
. . PUNCT . punct 6
""")
QA["frog"] = [
    ("increases", "increase", "What does something increase?", "the area of the foot"),
    ("propel", "propel", "What does something help propel?", "the frog"),
]

S["eyelid"] = ("The eyes appear to be narrowly open due to the lowered upper eyelid, probably "
               "an adaptation to shield the eyes from the sun's glare.", """
The the DET DT det 2
eyes eye NOUN NNS nsubj 3
appear appear VERB VBP ROOT 0
to to PART TO aux 5
be be AUX VB xcomp 3
narrowly narrowly ADV RB advmod 7
open open ADJ JJ acomp 5
due due ADP IN prep 7
to to ADP IN pcomp 8
the the DET DT det 13
lowered lower VERB VBN amod 13
upper upper ADJ JJ amod 13
eyelid eyelid NOUN NN pobj 9
, , PUNCT , punct 3
probably probably ADV RB advmod 17
an an DET DT det 17
adaptation adaptation NOUN NN npadvmod 3
to to PART TO aux 19
shield shield VERB VB acl 17
the the DET DT det 21
eyes eye NOUN NNS dobj 19
from from ADP IN prep 19
the the DET DT det 24
sun sun NOUN NN poss 26
's 's PART POS case 24
glare glare NOUN NN pobj 22
. . PUNCT . punct 3
""")
QA["eyelid"] = [
    ("shield", "shield", "What does something shield?", "the eyes"),
    ("appear", "appear", "What appears?", "The eyes"),
]

S["discovery"] = ("Researchers discovered the species in 1901.", """
Researchers researcher NOUN NNS nsubj 2
discovered discover VERB VBD ROOT 0
the the DET DT det 4
species species NOUN NN dobj 2
in in ADP IN prep 2
1901 1901 NUM CD pobj 5 DATE
. . PUNCT . punct 2
""")
QA["discovery"] = [
    ("discovered", "discover", "What did someone discover?", "the species"),
    ("discovered", "discover", "When did someone discover something?", "in 1901"),
]

S["gecko"] = ("Increasing humidity typically fortifies gecko adhesion, even on hydrophobic "
              "surfaces, yet is reduced if completely immersed in water.", """
Increasing increase VERB VBG csubj 4
humidity humidity NOUN NN dobj 1
typically typically ADV RB advmod 4
fortifies fortify VERB VBZ ROOT 0
gecko gecko NOUN NN compound 6
adhesion adhesion NOUN NN dobj 4
, , PUNCT , punct 4
even even ADV RB advmod 9
on on ADP IN prep 4
hydrophobic hydrophobic ADJ JJ amod 11
surfaces surface NOUN NNS pobj 9
, , PUNCT , punct 4
yet yet CCONJ CC cc 4
is be AUX VBZ auxpass 15
reduced reduce VERB VBN conj 4
if if SCONJ IN mark 18
completely completely ADV RB advmod 18
immersed immerse VERB VBN advcl 15
in in ADP IN prep 18
water water NOUN NN pobj 19
. . PUNCT . punct 4
""")
QA["gecko"] = [
    ("fortifies", "fortify", "What does something fortify?", "gecko adhesion"),
    ("Increasing", "increase", "What is increasing?", "humidity"),
    ("immersed", "immerse", "Where is something immersed?", "in water"),
]

S["shark"] = ("Their dermal teeth give them hydrodynamic advantages as they reduce turbulence "
              "when swimming.", """
Their their PRON PRP$ poss 3
dermal dermal ADJ JJ amod 3
teeth tooth NOUN NNS nsubj 4
give give VERB VBP ROOT 0
them they PRON PRP dative 4
hydrodynamic hydrodynamic ADJ JJ amod 7
advantages advantage NOUN NNS dobj 4
as as SCONJ IN mark 10
they they PRON PRP nsubj 10
reduce reduce VERB VBP advcl 4
turbulence turbulence NOUN NN dobj 10
when when SCONJ WRB advmod 13
swimming swim VERB VBG advcl 10
. . PUNCT . punct 4
""")
QA["shark"] = [
    ("give", "give", "What does something give?", "hydrodynamic advantages"),
    ("reduce", "reduce", "What does something reduce?", "turbulence"),
]

S["termite"] = ("Wind blowing across the tops of the towers enhances the circulation of air "
                "through the mounds, which also include side vents in their construction.", """
Wind wind NOUN NN nsubj 9
blowing blow VERB VBG acl 1
across across ADP IN prep 2
the the DET DT det 5
tops top NOUN NNS pobj 3
of of ADP IN prep 5
the the DET DT det 8
towers tower NOUN NNS pobj 6
enhances enhance VERB VBZ ROOT 0
the the DET DT det 11
circulation circulation NOUN NN dobj 9
of of ADP IN prep 11
air air NOUN NN pobj 12
through through ADP IN prep 9
the the DET DT det 16
mounds mound NOUN NNS pobj 14
, , PUNCT , punct 16
which which PRON WDT nsubj 20
also also ADV RB advmod 20
include include VERB VBP relcl 16
side side NOUN NN compound 22
vents vent NOUN NNS dobj 20
in in ADP IN prep 20
their their PRON PRP$ poss 25
construction construction NOUN NN pobj 23
. . PUNCT . punct 9
""")
QA["termite"] = [
    ("enhances", "enhance", "What does something enhance?", "the circulation of air"),
    ("include", "include", "What does something include?", "side vents"),
]


def parse_rows(text, table):
    rows = [r.split() for r in table.strip().splitlines()]
    tokens = []
    pos = 0
    for i, r in enumerate(rows):
        if len(r) not in (6, 7):
            raise ValueError(f"bad row {r}")
        word, lemma, upos, tag, dep, head = r[:6]
        at = text.find(word, pos)
        if at < 0:
            raise ValueError(f"token {word!r} not found after {pos} in {text!r}")
        pos = at + len(word)
        head = int(head)
        tok = {"text": word, "lemma": lemma, "pos": upos, "tag": tag,
               "dep": dep, "head": i if head == 0 else head - 1}
        if len(r) == 7:
            tok["ent"] = r[6]
        tokens.append(tok)
    roots = [t for i, t in enumerate(tokens) if t["head"] == i]
    if len(roots) != 1:
        raise ValueError(f"{len(roots)} roots in {text!r}")
    return {"tokens": tokens}


def random_tree(rng):
    """Well-formed tree with spaCy-like labels so the patterns can fire."""
    n = rng.randint(2, 25)
    pos_pool = ["VERB", "VERB", "NOUN", "NOUN", "NOUN", "ADJ", "ADP", "AUX", "ADV", "DET"]
    dep_pool = ["dobj", "dobj", "amod", "compound", "prep", "pobj", "xcomp", "aux",
                "oprd", "acomp", "prt", "npadvmod", "nsubjpass", "nsubj", "det"]
    order = list(range(n))
    rng.shuffle(order)
    root = order[0]
    heads = {root: root}
    for k in range(1, n):
        heads[order[k]] = order[rng.randrange(k)]
    tokens = []
    for i in range(n):
        tokens.append({"text": f"w{i}", "lemma": f"w{i}", "pos": rng.choice(pos_pool),
                       "tag": "", "dep": "ROOT" if i == root else rng.choice(dep_pool),
                       "head": heads[i]})
    return {"tokens": tokens}


def main():
    corpus_dir = os.path.join(HERE, "corpus")
    os.makedirs(corpus_dir, exist_ok=True)
    for sub in ("parse", "srl", "trees"):
        os.makedirs(os.path.join(HERE, sub), exist_ok=True)
    parsed = {}
    with open(os.path.join(corpus_dir, "articles.jsonl"), "w") as out:
        for article_id, title, keys in ARTICLES:
            text = " ".join(S[k][0] for k in keys)
            out.write(json.dumps({"article_id": article_id, "title": title,
                                  "organism": title,
                                  "source_url": "https://en.wikipedia.org/wiki/" +
                                  title.replace(" ", "_"),
                                  "text": text}) + "\n")
            for idx, key in enumerate(keys):
                sid = f"{article_id}#{idx}"
                tree = parse_rows(*S[key])
                parsed[sid] = tree
                with open(os.path.join(HERE, "parse", sid + ".json"), "w") as f:
                    json.dump(tree, f, indent=1)
                    f.write("\n")
                qa = [{"verb": v, "verb_lemma": l, "question": q, "answer": a}
                      for v, l, q, a in QA[key]]
                with open(os.path.join(HERE, "srl", sid + ".json"), "w") as f:
                    json.dump(qa, f, indent=1)
                    f.write("\n")
    rng = random.Random(20240611)
    trees = [dict(t, sentence_id=sid) for sid, t in sorted(parsed.items())
             if len(t["tokens"]) <= 25]
    while len(trees) < 100:
        trees.append(dict(random_tree(rng), sentence_id=f"synthetic#{len(trees)}"))
    with open(os.path.join(HERE, "trees", "brute_force_trees.jsonl"), "w") as f:
        for t in trees:
            f.write(json.dumps(t) + "\n")


if __name__ == "__main__":
    main()
