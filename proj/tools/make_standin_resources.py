#!/usr/bin/env python3
"""Writes the open miniature stand-in resources and the default feature manifest.

The real lexicons (LIWC, COCA n-gram tables, ...) are licensed. The stand-ins
share their schemas (dimension names, key conventions, match modes) but hold a
small vocabulary with synthetic scores. Swap in the real files by editing
data/resources/resources.json; the manifest only references lexicon and
dimension names.

Usage: python3 tools/make_standin_resources.py [data_dir]
"""

import json
import math
import random
import sys
from pathlib import Path

SEED = 20221

# word -> coarse affect used to derive plausible stand-in scores
EMOTION_WORDS = {
    "joy": "happy glad joy joyful delight delighted cheerful smile laugh love lovely wonderful great good fun "
           "excited exciting celebrate pleased proud hope hopeful enjoy enjoyed beautiful grateful thanks win "
           "success amazing awesome best kind friend sweet peace calm relief relieved",
    "sadness": "sad sorrow grief cry cried tears lonely alone miss missed loss lost hurt pain depressed unhappy "
               "sorry regret mourn funeral heartbroken disappointed disappointment gloomy",
    "anger": "angry anger mad furious rage hate hated annoyed annoying irritated fight fought unfair insult "
             "outraged hostile yell shout blame",
    "fear": "afraid fear scared scary terrified terror panic anxious anxiety worry worried nervous danger "
            "dangerous threat horror dread frightened",
    "disgust": "disgust disgusting gross nasty sick vile awful rotten filthy dirty revolting",
    "surprise": "surprise surprised shocked shock sudden suddenly unexpected amazed astonished wow strange",
    "shame": "shame ashamed embarrassed embarrassment guilt guilty humiliated",
}

COMMON_WORDS = (
    "the a an and or but if of to in on at by for with from about into over after before because although "
    "when while since until that this these those i you he she it we they me him her us them my your his its "
    "our their is are was were be been being have has had do does did can could will would shall should may "
    "might must not no yes very too also never always often just really so then now here there again still "
    "already soon even ever quite almost all some any every each many few more most other such one two three "
    "first last new old big small little long high young time day year week life home house world work school "
    "family people man woman child children friend dog cat car city country money job book word name place "
    "thing way part hand head eye face night morning exam news story question problem idea reason game team "
    "go went gone come came get got make made know knew think thought see saw want feel felt take took give "
    "gave say said tell told run ran walk talk call ask need try leave left find found keep start stop help "
    "play move live believe happen bring write read hear meet pass passed passing"
).split()

COMMON_WORDS += ["barked", "bark", "runs", "running", "look", "looked", "study", "studied", "today", "tomorrow"]


def vocabulary():
    words = []
    for w in COMMON_WORDS:
        if w not in words:
            words.append(w)
    for group in EMOTION_WORDS.values():
        for w in group.split():
            if w not in words:
                words.append(w)
    return words


def affect_of(word):
    for emo, group in EMOTION_WORDS.items():
        if word in group.split():
            return emo
    return None


VALENCE = {"joy": 0.85, "sadness": 0.15, "anger": 0.15, "fear": 0.2, "disgust": 0.1, "surprise": 0.6,
           "shame": 0.2, None: 0.5}
AROUSAL = {"joy": 0.7, "sadness": 0.3, "anger": 0.85, "fear": 0.8, "disgust": 0.6, "surprise": 0.85,
           "shame": 0.45, None: 0.4}
DOMINANCE = {"joy": 0.7, "sadness": 0.3, "anger": 0.65, "fear": 0.2, "disgust": 0.5, "surprise": 0.45,
             "shame": 0.25, None: 0.5}

GI_CATEGORIES = (
    "Positiv Negativ Pstv Affil Ngtv Hostile Strong Power Weak Submit Active Passive Pleasur Pain Feel Arousal "
    "EMOT Virtue Vice Ovrst Undrst Academ Doctrin Econ@ Exch ECON Exprsv Legal Milit Polit@ POLIT Relig Role "
    "COLL Work Ritual SocRel Race Kin@ MALE Female Nonadlt HU ANI PLACE Social Region Route Aquatic Land Sky "
    "Object Tool Food Vehicle BldgPt ComnObj NatObj BodyPt ComForm COM Say Need Goal Try Means Persist Complet "
    "Fail NatrPro Begin Vary Increas Decreas Finish Stay Rise Exert Fetch Travel Fall Think Know Causal Ought "
    "Perceiv Compare Eval@ EVAL Solve Abs@ ABS Quality Quan NUMB ORD CARD FREQ DIST Time@ TIME Space POS DIM "
    "Rel COLOR Self Our You Name Yes No Negate Intrj IAV DAV SV IPadj IndAdj PowGain PowLoss PowEnds PowAren "
    "PowCon PowCoop PowAuPt PowPt PowDoct PowAuth PowOth PowTot RcEthic RcRelig RcGain RcLoss RcEnds RcTot "
    "RspGain RspLoss RspOth RspTot AffGain AffLoss AffPt AffOth AffTot WltPt WltTran WltOth WltTot WlbGain "
    "WlbLoss WlbPhys WlbPsyc WlbPt WlbTot EnlGain EnlLoss EnlEnds EnlPt EnlOth EnlTot SklAsth SklPt SklOth "
    "SklTot TrnGain TrnLoss TranLw MeansLw EndsLw ArenaLw PtLw Nation Anomie NegAff PosAff SureLw If NotLw "
    "TimeSpc FormLw"
).split()

LIWC_CATEGORIES = (
    "function pronoun ppron i we you shehe they ipron article prep auxverb adverb conj negate verb adj compare "
    "interrog number quant affect posemo negemo anx anger sad social family friend female male cogproc insight "
    "cause discrep tentat certain differ percept see hear feel bio body health sexual ingest drives affiliation "
    "achieve power reward risk focuspast focuspresent focusfuture relativ motion space time work leisure home "
    "money relig death informal swear netspeak assent nonflu filler"
).split()

GALC_CATEGORIES = (
    "admiration amusement anger anxiety beingtouched boredom compassion contempt contentment desperation "
    "disappointment disgust dissatisfaction envy fear feelinglove gratitude guilt happiness hatred hope "
    "humility interest irritation jealousy joy longing lust pleasure pride relaxation relief sadness shame "
    "surprise tension positive negative"
).split()

NRC_EMOTIONS = "anger anticipation disgust fear joy negative positive sadness surprise trust".split()
DEPECHE = "afraid amused angry annoyed dont_care happy inspired sad".split()
ANEW = ["valence_mean", "arousal_mean", "dominance_mean", "valence_male", "arousal_male", "dominance_male",
        "valence_female", "arousal_female", "dominance_female"]
ANEW_EMO = [f"{e}_{s}" for e in ("happiness", "anger", "sadness", "fear", "disgust") for s in ("mean", "sd")]
SENTIC = "pleasantness attention sensitivity aptitude polarity".split()
S140 = ["sentiment_score"]

REGISTERS = ["spoken", "magazine", "fiction", "news", "academic"]

SAMPLE_TEXT = """
i passed the exam and i am so happy today . the dog barked at the man . he runs to the house every morning .
i was afraid when the car came too fast . we lost the game and the team was sad . she felt angry about the
unfair news . they want to see the new city . it was a great day with my family . i think the story is
strange but good . you can call me when you need help . the children laugh and play in the school .
my friend told me the news and i cried . people often worry about money and work . the old man walked home
alone at night . i love this book because it makes me smile . he was proud of his work . we hope the problem
will pass soon . that was a terrible and disgusting thing to say . the city was quiet in the morning .
"""


def fmt(x):
    return f"{x:.4f}"


def write_lexicon(root, name, dims, rows, match_on="lemma", match_mode="exact"):
    with open(root / "lexicons" / f"{name}.tsv", "w") as f:
        f.write("term\t" + "\t".join(dims) + "\n")
        for term, values in rows:
            f.write(term + "\t" + "\t".join(fmt(v) for v in values) + "\n")
    with open(root / "lexicons" / f"{name}.json", "w") as f:
        json.dump({"name": name, "match_on": match_on, "match_mode": match_mode}, f, indent=2)
        f.write("\n")


def clamp01(x):
    return max(0.0, min(1.0, x))


def make_lexicons(root, rng):
    vocab = vocabulary()
    affective = [w for w in vocab if affect_of(w)]

    def vad(w, noise=0.05):
        a = affect_of(w)
        return [clamp01(VALENCE[a] + rng.gauss(0, noise)), clamp01(AROUSAL[a] + rng.gauss(0, noise)),
                clamp01(DOMINANCE[a] + rng.gauss(0, noise))]

    # 1 ANEW: 1-9 scales, overall / male / female
    rows = []
    for w in vocab[::2] + affective:
        base = [1 + 8 * v for v in vad(w)]
        rows.append((w, base + [b + rng.gauss(0, 0.3) for b in base] + [b + rng.gauss(0, 0.3) for b in base]))
    write_lexicon(root, "anew", ANEW, dedupe(rows))

    # 2 ANEW-Emo: 1-5 ratings per discrete emotion, mean and sd
    emo_order = ["joy", "anger", "sadness", "fear", "disgust"]
    rows = []
    for w in affective:
        a = affect_of(w)
        vals = []
        for e in emo_order:
            m = 4.2 if a == e else 1.4
            vals += [m + rng.gauss(0, 0.2), abs(0.8 + rng.gauss(0, 0.1))]
        rows.append((w, vals))
    write_lexicon(root, "anew_emo", ANEW_EMO, rows)

    # 3 DepecheMood++: probabilities summing to 1
    dm_of = {"joy": "happy", "sadness": "sad", "anger": "angry", "fear": "afraid", "disgust": "annoyed",
             "surprise": "amused", "shame": "sad"}
    rows = []
    for w in vocab:
        a = affect_of(w)
        raw = [rng.random() * 0.3 + (2.0 if dm_of.get(a) == d else 0.0) for d in DEPECHE]
        s = sum(raw)
        rows.append((w, [r / s for r in raw]))
    write_lexicon(root, "depechemood", DEPECHE, rows)

    # 4 GALC: wildcard stems, binary category membership (surface match)
    galc_of = {"joy": ["happiness", "joy", "pleasure", "positive"], "sadness": ["sadness", "negative"],
               "anger": ["anger", "irritation", "hatred", "negative"], "fear": ["fear", "anxiety", "negative"],
               "disgust": ["disgust", "contempt", "negative"], "surprise": ["surprise"],
               "shame": ["shame", "guilt", "negative"]}
    rows = []
    seen = set()
    for w in affective:
        stem = w[:max(4, len(w) - 3)] + "*"
        if stem in seen:
            continue
        seen.add(stem)
        cats = galc_of[affect_of(w)]
        rows.append((stem, [1.0 if c in cats else 0.0 for c in GALC_CATEGORIES]))
    write_lexicon(root, "galc", GALC_CATEGORIES, rows, match_on="surface", match_mode="wildcard")

    # 5 General Inquirer: binary tags
    rows = []
    for w in vocab:
        a = affect_of(w)
        vals = []
        for c in GI_CATEGORIES:
            if c in ("Positiv", "Pstv", "PosAff", "Pleasur"):
                p = 0.9 if a == "joy" else 0.05
            elif c in ("Negativ", "Ngtv", "NegAff", "Hostile", "Pain"):
                p = 0.8 if a in ("anger", "sadness", "fear", "disgust", "shame") else 0.05
            elif c in ("EMOT", "Feel", "Arousal"):
                p = 0.7 if a else 0.02
            else:
                p = 0.04
            vals.append(1.0 if rng.random() < p else 0.0)
        rows.append((w, vals))
    write_lexicon(root, "general_inquirer", GI_CATEGORIES, rows)

    # 6 LIWC: wildcard patterns on surface forms, binary membership
    liwc_aff = {"joy": ["affect", "posemo"], "sadness": ["affect", "negemo", "sad"],
                "anger": ["affect", "negemo", "anger"], "fear": ["affect", "negemo", "anx"],
                "disgust": ["affect", "negemo"], "surprise": ["affect"], "shame": ["affect", "negemo"]}
    func = set("the a an and or but if of to in on at by for with from about into i you he she it we they me "
               "him her us them my your his its our their is are was were be been have has had do does did can "
               "could will would should may might must not no".split())
    rows = []
    seen = set()
    for w in vocab:
        a = affect_of(w)
        cats = set(liwc_aff.get(a, []))
        if w in func:
            cats.add("function")
        if w in ("i", "me", "my"):
            cats |= {"pronoun", "ppron", "i"}
        if w in ("we", "us", "our"):
            cats |= {"pronoun", "ppron", "we"}
        if w in ("the", "a", "an"):
            cats.add("article")
        if w in ("not", "no", "never"):
            cats.add("negate")
        if w in ("family", "child", "children"):
            cats |= {"social", "family"}
        if w in ("friend",):
            cats |= {"social", "friend"}
        if w in ("money", "job", "work"):
            cats |= {"work", "money"} if w == "money" else {"work"}
        if w in ("home", "house"):
            cats.add("home")
        key = w
        if a and len(w) > 5:
            key = w[:len(w) - 2] + "*"
        if key in seen:
            continue
        seen.add(key)
        if not cats:
            cats.add(rng.choice(["relativ", "time", "space", "motion", "cogproc", "percept"]))
        rows.append((key, [1.0 if c in cats else 0.0 for c in LIWC_CATEGORIES]))
    write_lexicon(root, "liwc", LIWC_CATEGORIES, rows, match_on="surface", match_mode="wildcard")

    # 7 NRC word-emotion association: binary
    nrc_of = {"joy": ["joy", "positive", "trust", "anticipation"], "sadness": ["sadness", "negative"],
              "anger": ["anger", "negative"], "fear": ["fear", "negative"], "disgust": ["disgust", "negative"],
              "surprise": ["surprise"], "shame": ["sadness", "negative", "fear"]}
    rows = [(w, [1.0 if e in nrc_of[affect_of(w)] else 0.0 for e in NRC_EMOTIONS]) for w in affective]
    write_lexicon(root, "nrc_emotion", NRC_EMOTIONS, rows)

    # 8 NRC-VAD: [0, 1]
    rows = [(w, vad(w)) for w in vocab]
    write_lexicon(root, "nrc_vad", ["valence", "arousal", "dominance"], rows)

    # 9 SenticNet: [-1, 1]
    rows = []
    for w in affective:
        v, a, d = vad(w)
        pol = 2 * v - 1
        rows.append((w, [pol, 2 * a - 1, 2 * d - 1, pol * 0.8 + rng.gauss(0, 0.05), pol]))
    write_lexicon(root, "senticnet", SENTIC, rows)

    # 10 Sentiment140: unbounded PMI-style score
    rows = [(w, [(VALENCE[affect_of(w)] - 0.5) * 6 + rng.gauss(0, 0.3)]) for w in vocab]
    write_lexicon(root, "sentiment140", S140, rows, match_on="surface")


def dedupe(rows):
    out, seen = [], set()
    for term, vals in rows:
        if term in seen:
            continue
        seen.add(term)
        out.append((term, vals))
    return out


def make_norms(root, rng):
    vocab = vocabulary()
    with open(root / "norms" / "aoa.tsv", "w") as f:
        for w in vocab:
            f.write(f"{w}\t{fmt(3.0 + len(w) * 0.9 + rng.gauss(0, 0.8))}\n")
    with open(root / "norms" / "prevalence.tsv", "w") as f:
        for w in vocab:
            f.write(f"{w}\t{fmt(clamp01(0.99 - len(w) * 0.01 - abs(rng.gauss(0, 0.02))))}\n")

    tokens = SAMPLE_TEXT.split()
    sentences, cur = [], []
    for t in tokens:
        if t == ".":
            sentences.append(cur)
            cur = []
        else:
            cur.append(t)
    for reg_i, reg in enumerate(REGISTERS):
        for n in range(1, 6):
            grams = {}
            for s in sentences:
                for i in range(len(s) - n + 1):
                    g = " ".join(s[i:i + n])
                    if g not in grams and rng.random() < 0.85 - 0.1 * n + 0.03 * reg_i:
                        # log10 frequency per million, decreasing with n
                        grams[g] = max(0.0, 5.5 - 1.0 * n + rng.gauss(0, 0.6))
            with open(root / "norms" / f"register_{reg}_{n}.tsv", "w") as f:
                for g, v in grams.items():
                    f.write(f"{g}\t{fmt(v)}\n")


def make_wordlists(root):
    ngsl = [w for w in COMMON_WORDS if w not in ("barked", "exam")]
    ngsl += ["happy", "sad", "angry", "afraid", "love", "hope", "fear", "sorry", "good", "great", "kind",
             "friend", "win", "lose", "cry", "laugh", "smile", "hate", "worry"]
    ngsl = list(dict.fromkeys(ngsl))
    (root / "wordlists" / "ngsl.txt").write_text("\n".join(ngsl) + "\n")


def make_resource_index(root):
    lexicons = ["anew", "anew_emo", "depechemood", "galc", "general_inquirer", "liwc", "nrc_emotion",
                "nrc_vad", "senticnet", "sentiment140"]
    index = {
        "lexicons": [{"name": n, "file": f"lexicons/{n}.tsv", "schema": f"lexicons/{n}.json"} for n in lexicons],
        "norms": [{"name": "aoa", "file": "norms/aoa.tsv"}, {"name": "prevalence", "file": "norms/prevalence.tsv"}]
                 + [{"name": f"register_{r}_{n}", "file": f"norms/register_{r}_{n}.tsv"}
                    for r in REGISTERS for n in range(1, 6)],
        "wordlists": {"ngsl": "wordlists/ngsl.txt", "familiar": "wordlists/ngsl.txt"},
    }
    with open(root / "resources.json", "w") as f:
        json.dump(index, f, indent=2)
        f.write("\n")


def spec(fid, group, kind, invariant, **config):
    return {"id": fid, "group": group, "kind": kind, "invariant": invariant, "config": config}


def make_manifest(path):
    feats = []
    # syntax: 15 ratios over parse-derived counts + 4 compression ratios
    ratios = [
        ("mls", "words", "sentences"), ("mlc", "words", "clauses"), ("mlt", "words", "t_units"),
        ("c_s", "clauses", "sentences"), ("c_t", "clauses", "t_units"), ("dc_c", "dependent_clauses", "clauses"),
        ("dc_t", "dependent_clauses", "t_units"), ("t_s", "t_units", "sentences"),
        ("ct_t", "complex_t_units", "t_units"), ("cp_t", "coordinate_phrases", "t_units"),
        ("cp_c", "coordinate_phrases", "clauses"), ("cn_t", "complex_nominals", "t_units"),
        ("cn_c", "complex_nominals", "clauses"), ("vp_t", "verb_phrases", "t_units"),
        ("vp_s", "verb_phrases", "sentences"),
    ]
    for fid, num, den in ratios:
        feats.append(spec(f"syntax.{fid}", "syntax", "syntax_ratio", True, num=num, den=den))
    for stream in ["chars", "words", "pos", "lemma_suffix"]:
        feats.append(spec(f"syntax.deflate_{stream}", "syntax", "deflate", False, stream=stream))

    # lexical richness / diversity / sophistication
    lexical = [("lexical_density", True)]
    lexical += [(m, m == "ndw") for m in
                ["ndw", "ttr", "cttr", "rttr", "logttr", "uber", "lv", "vv1", "svv1", "cvv1", "vv2", "nv", "adjv",
                 "advv", "modv"]]
    lexical += [("ls1", True), ("ls2", True), ("vs1", False), ("vs2", False), ("cvs1", False),
                ("wordlist_token_ratio", True), ("wordlist_type_ratio", True)]
    for m, inv in lexical:
        feats.append(spec(f"lexical.{m}", "lexical", "lexical", inv, measure=m, list="ngsl"))
    for table in ["aoa", "prevalence"]:
        for stat in ["mean", "coverage"]:
            feats.append(spec(f"lexical.{table}_{stat}", "lexical", "norm", True, table=table, stat=stat))
    for reg in REGISTERS:
        for n in range(1, 6):
            for stat in ["mean", "attested"]:
                feats.append(spec(f"lexical.register_{reg}_{n}_{stat}", "lexical", "ngram", True,
                                  table=f"register_{reg}_{n}", stat=stat))

    # readability
    for idx in ["flesch_reading_ease", "flesch_kincaid_grade", "smog", "gunning_fog", "coleman_liau", "ari", "lix",
                "rix", "fry_x", "fry_y", "linsear_write", "forcast", "dale_chall", "spache"]:
        feats.append(spec(f"readability.{idx}", "readability", "readability", True, index=idx, list="familiar"))

    # lexicons: coverage + selected dimensions per lexicon, 325 in total
    selection = [
        ("anew", ANEW), ("anew_emo", ANEW_EMO), ("depechemood", DEPECHE), ("galc", GALC_CATEGORIES),
        ("general_inquirer", None), ("liwc", LIWC_CATEGORIES), ("nrc_emotion", NRC_EMOTIONS),
        ("nrc_vad", ["valence", "arousal", "dominance"]), ("senticnet", SENTIC), ("sentiment140", S140),
    ]
    fixed = sum(len(d) + 1 for _, d in selection if d is not None)
    gi_count = 325 - fixed - 1
    assert 0 < gi_count <= len(GI_CATEGORIES), gi_count
    for name, dims in selection:
        if dims is None:
            dims = GI_CATEGORIES[:gi_count]
        feats.append(spec(f"lexicon.{name}.coverage", "lexicon", "lexicon_coverage", True, lexicon=name))
        for d in dims:
            feats.append(spec(f"lexicon.{name}.{d}", "lexicon", "lexicon_mean", True, lexicon=name, dimension=d))

    counts = {}
    for f in feats:
        counts[f["group"]] = counts.get(f["group"], 0) + 1
    assert counts == {"syntax": 19, "lexical": 77, "readability": 14, "lexicon": 325}, counts
    assert len({f["id"] for f in feats}) == 435
    with open(path, "w") as f:
        json.dump({"name": "psyling-435", "version": 1, "features": feats}, f, indent=1)
        f.write("\n")


def main():
    data = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
    root = data / "resources"
    for sub in ("lexicons", "norms", "wordlists"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    rng = random.Random(SEED)
    make_lexicons(root, rng)
    make_norms(root, rng)
    make_wordlists(root)
    make_resource_index(root)
    make_manifest(data / "manifest_435.json")


if __name__ == "__main__":
    main()
