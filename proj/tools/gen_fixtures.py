# Copyright 2026 The InstKG Authors.
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

"""Writes the generated fixture trees under fixtures/.

awi85     85 AWI device objects over three pages.
scale100  1:100-scale graph: 2 instruments, 520 datasets, 43 linked articles.
"""

import argparse
import json
import pathlib
import random

RETRIEVED = "2024-05-02T09:00:00Z"

LOCATIONS = ["Fram Strait", "Arctic Ocean", "Weddell Sea", "North Sea", "Yucatan Strait",
             "Greenland Sea", "Barents Sea", "Labrador Sea"]
PARAMETERS = [
    ("Salinity", "Sal", ""),
    ("Temperature, water", "Temp", "deg C"),
    ("Density, sigma-theta (0)", "Sigma-theta", "kg/m**3"),
    ("Pressure, water", "Press", "dbar"),
    ("Oxygen", "O2", "umol/l"),
    ("Depth, water", "Depth water", "m"),
]
TOPICS = [
    ("CTD casts", "salinity", "ocean circulation"),
    ("hydroacoustic measurements", "backscatter", "water column studies"),
    ("multibeam echosounding", "bathymetry", "seafloor mapping"),
    ("sediment cores", "grain size", "sedimentation"),
]


def write_json(path, obj):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def stem(identifier):
    return identifier.lower().replace("/", "_").replace(":", "_")


def awi_device(n, rng):
    kind = rng.choice(["CTD", "ADCP", "Box corer", "Multibeam echosounder", "Thermosalinograph"])
    return {
        "id": 5000 + n,
        "pid": f"hdl:10013/sensor.{5000 + n}",
        "title": f"{kind} {n:03d}",
        "description": f"{kind} unit {n} operated from RV Polarstern",
        "manufacturer": rng.choice(["Sea-Bird Scientific", "Teledyne RDI", "Kongsberg", "RBR Ltd."]),
        "owner": "Alfred Wegener Institute",
        "url": f"https://sensor.awi.de/?urn=vessel:ps:dev_{5000 + n}",
        "type": {"generalName": kind},
        "components": [{"title": f"{kind} sensor {n}-{k}"} for k in range(rng.randint(0, 2))],
        "relatedArticles": [],
    }


def gen_awi85(root):
    rng = random.Random(85)
    devices = [awi_device(n, rng) for n in range(85)]
    pages = [devices[0:30], devices[30:60], devices[60:85]]
    names = ["instruments.json", "instruments_p2.json", "instruments_p3.json"]
    for i, page in enumerate(pages):
        body = {"items": page}
        if i == 0:
            body["retrieved_at"] = RETRIEVED
        if i + 1 < len(pages):
            body["next"] = names[i + 1]
        write_json(root / "awi" / names[i], body)


def tab_file(doi, title, location, start, params):
    lines = ["/* DATA DESCRIPTION:",
             f"Citation:\t{title}. PANGAEA, https://doi.org/{doi}",
             f"Location:\t{location}",
             "Parameter(s):\tDate/Time (Date/Time)"]
    for name, short, unit in params:
        unit_part = f" [{unit}]" if unit else ""
        lines.append(f"\t{name}{unit_part} ({short})")
    lines.append("*/")
    header = ["Date/Time"] + [f"{s} [{u}]" if u else s for _, s, u in params]
    lines.append("\t".join(header))
    for day in range(3):
        row = [f"2015-{start[0]:02d}-{start[1] + day:02d}"]
        row += [f"{10.0 + k + day * 0.5:.1f}" for k in range(len(params))]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def gen_scale100(root):
    rng = random.Random(100)
    awi_pid = "hdl:10013/sensor.9001"
    dc_doi = "10.5442/NI009001"
    write_json(root / "awi" / "instruments.json", {
        "retrieved_at": RETRIEVED,
        "items": [{
            "id": 9001, "pid": awi_pid, "title": "CTD",
            "description": "Shipboard CTD rosette",
            "manufacturer": "Sea-Bird Scientific", "owner": "Alfred Wegener Institute",
            "url": "https://sensor.awi.de/?urn=vessel:ps:ctd_9001",
            "type": {"generalName": "CTD"},
            "components": [{"title": "CTD_Seabird-SBE-911plus"}],
            "relatedArticles": [],
        }],
    })
    write_json(root / "datacite" / "instruments.json", {
        "retrieved_at": RETRIEVED,
        "items": [{
            "id": f"https://doi.org/{dc_doi}", "name": "Multibeam echosounder EM122",
            "description": "Deep-water multibeam echosounder",
            "manufacturer": "Kongsberg", "owner": "GEOMAR",
            "url": "https://example.org/em122", "type": "Echosounder",
            "relatedIdentifiers": [],
        }],
    })

    pangaea = [f"10.1594/PANGAEA.{910000 + n}" for n in range(400)]
    datacite = [f"10.5442/ND{9000 + n:06d}" for n in range(120)]
    titles = {}
    for doi in pangaea + datacite:
        loc = rng.choice(LOCATIONS)
        titles[doi] = (f"Station data {doi.rsplit('.', 1)[-1]} from {loc}", loc)

    def listing(dois, base):
        size = 150
        chunks = [dois[i:i + size] for i in range(0, len(dois), size)]
        for i, chunk in enumerate(chunks):
            name = base + ".json" if i == 0 else f"{base}_p{i + 1}.json"
            body = {"items": [{"doi": d, "title": titles[d][0]} for d in chunk]}
            if i + 1 < len(chunks):
                body["next"] = f"{base}_p{i + 2}.json"
            yield name, body

    for name, body in listing(pangaea, stem(awi_pid)):
        write_json(root / "pangaea" / "datasets" / name, body)
    for name, body in listing(datacite, stem(dc_doi)):
        write_json(root / "datacite" / "datasets" / name, body)

    content = root / "pangaea" / "content"
    content.mkdir(parents=True, exist_ok=True)
    for n, doi in enumerate(pangaea):
        params = rng.sample(PARAMETERS, rng.randint(1, 4))
        start = (1 + n % 12, 1 + n % 25)
        (content / f"{stem(doi)}.tab").write_text(
            tab_file(doi, titles[doi][0], titles[doi][1], start, params), encoding="utf-8")

    links = {}
    articles = []
    everything = pangaea + datacite
    for a in range(43):
        doi = f"10.3389/fmars.2020.{600000 + a}"
        topic = TOPICS[a % len(TOPICS)]
        article = {
            "doi": doi,
            "title": f"Study {a} of {topic[2]} using {topic[0]}",
            "abstract": f"We used {topic[0]} to measure {topic[1]} for {topic[2]}.",
        }
        articles.append(article)
        for ds in rng.sample(everything, rng.randint(1, 4)):
            key = ds
            if rng.random() < 0.2:
                key = "https://doi.org/" + ds.lower()
            links.setdefault(key, []).append(article)
    write_json(root / "links" / "articles_by_dataset.json", dict(sorted(links.items())))
    write_json(root / "links" / "citations.json", {})

    for a, article in enumerate(articles):
        if a % 3:
            continue
        topic = TOPICS[a % len(TOPICS)]
        write_json(root / "unpaywall" / f"{stem(article['doi'])}.json",
                   {"doi": article["doi"], "pdf": None})
        text = (f"{article['title']}\n\n"
                f"The survey combined {topic[0]} with {topic[1]} records. "
                f"Results support {topic[2]} in the {rng.choice(LOCATIONS)}.\n")
        path = root / "articles" / f"{stem(article['doi'])}.txt"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")

    write_json(root / "pipeline.json", {
        "harvest": {"mode": "offline", "fixtures_dir": ".", "workers": 4},
        "output_dir": "../../build/scale100-out",
    })


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "fixtures"))
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    gen_awi85(out / "awi85")
    gen_scale100(out / "scale100")


if __name__ == "__main__":
    main()
