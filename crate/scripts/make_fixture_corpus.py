#!/usr/bin/env python3
"""Writes the offline fixture corpus used by the integration tests.

Pages are stored under their cache names (hex SHA-256 of the URL plus
`.html`) so the pipeline can run with fetching disabled.
"""

import hashlib
import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "crates" / "cli" / "tests" / "fixtures" / "corpus"
CORE_FIXTURES = ROOT / "crates" / "core" / "tests" / "fixtures"


def url_of(pub):
    return f"https://patents.google.com/patent/{pub}/en"


def cache_name(url):
    return hashlib.sha256(url.encode()).hexdigest() + ".html"


def sub(formula):
    out = []
    for ch in formula:
        out.append(f"<sub>{ch}</sub>" if ch.isdigit() else ch)
    return "".join(out)


def table(header, rows, header_cells=None):
    cells = header_cells or [sub(h) if any(c.isdigit() for c in h) else h for h in header]
    lines = ["<table>", "<tr>" + "".join(f"<th>{c}</th>" for c in cells) + "</tr>"]
    for r in rows:
        lines.append("<tr>" + "".join(f"<td>{v}</td>" for v in r) + "</tr>")
    lines.append("</table>")
    return "\n".join(lines)


def page(pub, title, dates, sections, pretty_pub=None):
    metas = [
        '<meta name="DC.type" content="patent">',
        f'<meta name="DC.title" content="{title}">',
        f'<meta name="citation_patent_publication_number" content="{pretty_pub or pub}">',
        '<meta name="DC.contributor" content="A. Inventor" scheme="inventor">',
        '<meta name="DC.contributor" content="Glassworks Inc." scheme="assignee">',
        f'<meta name="DC.date" content="{dates[0]}" scheme="dateSubmitted">',
        f'<meta name="DC.date" content="{dates[1]}" scheme="issue">',
    ]
    body = "\n".join(f"<patent-tables>\n{s}\n</patent-tables>" for s in sections)
    return (
        "<!DOCTYPE html>\n<html><head>\n"
        f"<title>{pub} - {title} - Google Patents</title>\n"
        + "\n".join(metas)
        + "\n</head><body>\n<section itemprop=\"description\"><p>Examples follow.</p>\n"
        + body
        + "\n</section></body></html>\n"
    )


def table2_page():
    # Twelve blocks precede the composition table, so it is block 12.
    filler = []
    for i in range(6):
        filler.append(table(["Example", "Melting time (h)"], [[i + 1, 2 + i]]))
    for i in range(6):
        filler.append(table(["SiO2", "Al2O3", "Supplier"], [["grade A", "grade B", f"lot {i}"]]))
    composition = table(
        ["Nb2O5", "P2O5", "Na2O", "B2O3", "TiO2", "K2O", "SrO", "n", "Tliq", "vd"],
        [
            ["35.9", "22.1", "1.6", "18.3", "15.0", "5.0", "2.1", "1.950", "673", "18.6"],
            ["38.8", "20.9", "0.3", "8.7", "15.0", "15.4", "0.9", "1.984", "689", "19.2"],
            ["37.9", "21.4", "0.0", "12.1", "15.0", "12.1", "1.5", "1.967", "702", "19.0"],
        ],
        header_cells=[sub(x) for x in ["Nb2O5", "P2O5", "Na2O", "B2O3", "TiO2", "K2O", "SrO"]]
        + ["<i>n</i>", "T<sub>liq</sub> (°C)", "ν<sub>d</sub>"],
    )
    section = "<p>Table 2. Glass compositions (mol%).</p>\n" + "\n".join(filler + [composition])
    return page("US11485676B2", "High index phosphate glass", ("2020-06-18", "2022-11-01"), [section], "US:11485676:B2")


def liquidus_pair_page():
    t = table(
        ["Al2O3", "P2O5", "CaO", "MgO", "BaO", "K2O", "CuO", "Liquidus temperature (°C)", "Liquidus temperature (°C)"],
        [
            ["3.23", "41.75", "18.78", "8.16", "12.02", "14.56", "1.51", "690", "31623"],
            ["3.00", "42.00", "18.00", "9.00", "12.00", "14.50", "1.50", "720", ""],
            ["3.00", "42.00", "19.00", "8.00", "12.00", "14.50", "1.50", "2100", ""],
        ],
    )
    return page("US10106455B2", "Near-infrared absorbing glass", ("2016-03-02", "2018-10-23"),
                ["<p>Compositions in mol%.</p>\n" + t])


def low_dispersion_page():
    t = table(
        ["Al2O3", "P2O5", "B2O3", "CaO", "MgO", "SrO", "nd", "νd"],
        [
            ["21.20", "10.00", "8.90", "30.50", "7.70", "21.80", "1.456", "90.3"],
            ["20.00", "11.00", "9.00", "30.00", "8.00", "22.00", "1.470", "88.0"],
            ["20.00", "10.00", "9.00", "30.00", "8.00", "22.00", "1.480", "87.5"],
        ],
    )
    # No basis stated anywhere on this page.
    return page("US20090122407A1", "Laser-writable optical glass", ("2008-11-07", "2009-05-14"),
                ["<p>Table 3. Examples.</p>\n" + t])


def high_index_page():
    t = table(
        ["WO3", "B2O3", "La2O3", "TiO2", "Nb2O5", "ZrO2", "Y2O3", "nd", "nF"],
        [
            ["27.00", "15.00", "17.00", "12.01", "22.00", "4.99", "2.00", "2.1583", ""],
            ["26.00", "16.00", "17.00", "12.00", "22.00", "5.00", "2.00", "2.1400", "2.1700"],
        ],
    )
    return page("US20240286947A1", "High refractive index optical glass", ("2023-02-10", "2024-08-29"),
                ["<p>Examples 161 and 162.</p>\n" + t])


TABLE4_ROWS = [
    # SiO2, P2O5, ZrO2, Na2O, Al2O3, CaO, K2O, B2O3, La2O3, TiO2, nd, vd
    ["12.32", "0.00", "3.23", "0.00", "0.00", "0.00", "0.00", "29.72", "44.73", "10.00", "1.8046", "40.6"],
    ["12.15", "0.00", "2.96", "0.00", "0.00", "0.00", "0.00", "28.02", "46.87", "10.00", "1.8082", "40.4"],
    ["6.26", "0.00", "3.59", "0.00", "0.00", "0.00", "0.00", "35.18", "44.97", "10.00", "1.8107", "40.6"],
    ["6.26", "0.00", "3.60", "0.00", "0.00", "0.00", "0.00", "35.18", "44.96", "10.00", "1.8093", "41"],
    ["6.27", "0.00", "2.83", "0.00", "0.00", "0.00", "0.00", "35.32", "45.58", "10.00", "1.8118", "40.2"],
]
TABLE4_HEADER = ["SiO2", "P2O5", "ZrO2", "Na2O", "Al2O3", "CaO", "K2O", "B2O3", "La2O3", "TiO2", "nd", "νd"]


def lanthanum_page():
    t1 = table(TABLE4_HEADER, TABLE4_ROWS)
    t2 = table(
        ["SiO2", "B2O3", "La2O3", "Refractive index n", "Abbe number"],
        [["10.00", "40.00", "50.00", "1.7900", "45.0"], ["12.00", "40.00", "48.00", "1.7800", "46.0"]],
    )
    return page("US9000001B2", "Lanthanum borate optical glass", ("2013-01-15", "2015-04-21"),
                ["<p>All amounts in mol %.</p>\n" + t1 + "\n" + t2])


def silicate_page():
    t = table(
        ["SiO2", "Al2O3", "Na2O", "CaO", "MgO", "Liquidus (°F)", "Liquidus temperature (K)", "Tliq Air (°C)", "Tliq Pt (°C)"],
        [
            ["60.00", "15.00", "13.00", "8.00", "4.00", "1832", "", "", ""],
            ["61.00", "14.00", "13.00", "8.00", "4.00", "", "", "1050", "1060"],
            ["62.00", "13.00", "13.00", "8.00", "4.00", "", "1273.15", "", ""],
            ["63.00", "12.00", "13.00", "8.00", "4.00", "", "", "", ""],
        ],
    )
    return page("US9100002B2", "Aluminosilicate glass", ("2013-06-01", "2015-09-15"),
                ["<p>Compositions in wt%.</p>\n" + t])


def no_tables_page():
    return page("US9200003B2", "Glass melting furnace", ("2015-02-02", "2017-03-07"), [])


def irrelevant_page():
    t = table(["Example", "Melting time (h)", "Refractive index"], [["1", "4", "1.5"]])
    return page("US9400005B2", "Process for fining", ("2017-05-05", "2019-01-22"), [t])


def vertical_page():
    t = table(["Component", "Amount (wt%)"], [["SiO2", "70"], ["Na2O", "15"], ["CaO", "15"]])
    return page("US9500006B2", "Soda-lime glass", ("2017-08-08", "2019-07-30"),
                ["<p>Refractive index of 1.52.</p>\n" + t])


PAGES = {
    "US11485676B2": table2_page,
    "US10106455B2": liquidus_pair_page,
    "US20090122407A1": low_dispersion_page,
    "US20240286947A1": high_index_page,
    "US9000001B2": lanthanum_page,
    "US9100002B2": silicate_page,
    "US9200003B2": no_tables_page,
    "US9400005B2": irrelevant_page,
    "US9500006B2": vertical_page,
}
NOT_CACHED = "US9300004B2"

DICTIONARY = {
    "label_map": {},
    "blacklist": [],
    "patent_wavelength_map": {"US11485676B2": "nD"},
    "patent_unit_map": {},
    "patent_basis_map": {"US20090122407A1": "mol"},
}

REF_HEADER = ["SiO2", "Al2O3", "B2O3", "Nb2O5", "P2O5", "Na2O", "TiO2", "K2O", "SrO", "ZrO2", "La2O3",
              "Tliq(°C)", "nD", "Abbe Number"]


def ref_row(comp, tliq="", nd="", abbe=""):
    return [comp.get(o, "0") for o in REF_HEADER[:-3]] + [tliq, nd, abbe]


REF_A = [
    ref_row({"Nb2O5": "35.9", "P2O5": "22.1", "Na2O": "1.6", "B2O3": "18.3", "TiO2": "15", "K2O": "5", "SrO": "2.1"}, tliq="670"),
    ref_row({"SiO2": "70", "Na2O": "15", "Al2O3": "15"}, tliq="1100"),
    ref_row({"SiO2": "12.32", "ZrO2": "3.23", "B2O3": "29.72", "La2O3": "44.73", "TiO2": "10"}, nd="1.8040", abbe="40.7"),
]
REF_B = [
    ref_row({"SiO2": "12.32", "ZrO2": "3.23", "B2O3": "29.72", "La2O3": "44.73", "TiO2": "10"}, nd="1.8046", abbe="40.6"),
    ref_row({"SiO2": "75", "B2O3": "25"}, nd="1.48", abbe="65"),
]

CONFIG = """\
chunk_size = 2

[paths]
urls = "urls.txt"
corpus = "pages"
out = "out"
dictionary = "dictionary.json"
reference_a = "ref_a.csv"
reference_b = "ref_b.csv"

[compare]
reference_a_name = "RefA"
reference_b_name = "RefB"
bins = 10
"""


def write_csv(path, header, rows):
    path.write_text("\n".join(",".join(r) for r in [header] + rows) + "\n", encoding="utf-8")


def main():
    pages = CORPUS / "pages"
    pages.mkdir(parents=True, exist_ok=True)
    for old in pages.glob("*.html"):
        old.unlink()
    urls = []
    for pub, make in PAGES.items():
        url = url_of(pub)
        urls.append(url)
        (pages / cache_name(url)).write_text(make(), encoding="utf-8")
    urls.insert(7, url_of(NOT_CACHED))
    urls.append("not a url")
    urls.append(url_of("US11485676B2"))
    (CORPUS / "urls.txt").write_text("\n".join(urls) + "\n", encoding="utf-8")
    (CORPUS / "dictionary.json").write_text(json.dumps(DICTIONARY, indent=2) + "\n", encoding="utf-8")
    write_csv(CORPUS / "ref_a.csv", REF_HEADER, REF_A)
    write_csv(CORPUS / "ref_b.csv", REF_HEADER, REF_B)
    (CORPUS / "patglass.toml").write_text(CONFIG, encoding="utf-8")

    CORE_FIXTURES.mkdir(parents=True, exist_ok=True)
    (CORE_FIXTURES / "us11485676b2.html").write_text(table2_page(), encoding="utf-8")


if __name__ == "__main__":
    main()
