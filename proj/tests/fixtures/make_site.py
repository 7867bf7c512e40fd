"""Regenerates the 20-file crawl fixture site. Output is committed.

Link graph (depth from index.html):
  0  index
  1  about programs news people junk_short      (+ missing.html, a dead link)
  2  history campus mlt phd catalog.pdf carnival notfound_page stanford faculty
  3  founders map courses booth                  (beyond depth 2)
  -  orphan                                      (never linked)

Planted junk, each dropped by exactly one rule:
  junk_short     too_short     (has a keyword, under 200 characters)
  notfound_page  error_page    (title Page_not_found, has keywords)
  stanford       no_keyword
  news           no_keyword    (still links onward)
"""
import os
import shutil
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "site")

NAV = """<nav><ul><li><a href="/index.html">Carnegie Mellon Home</a></li>
<li><a href="/about.html">About CMU</a></li></ul></nav>"""

FILLER = (
    "Graduate students and faculty collaborate on research in language technologies, machine translation, "
    "speech recognition and information retrieval. Seminars meet weekly and visitors are welcome."
)


def page(title, paragraphs, links=(), nav=True, extra_head=""):
    body = []
    if nav:
        body.append(NAV)
    body.append("<div class=\"skip\">Skip to main content</div>")
    for p in paragraphs:
        body.append("<p>" + p + "</p>")
    if links:
        body.append("<ul>")
        for href, text in links:
            body.append('<li><a href="%s">%s</a></li>' % (href, text))
        body.append("</ul>")
    body.append("<footer>Copyright notice. Contact the webmaster.</footer>")
    return (
        "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>%s</title>%s"
        "<script>var tracker = 'Carnegie';</script><style>p { color: #333; }</style></head>\n<body>\n%s\n</body></html>\n"
        % (title, extra_head, "\n".join(body))
    )


PAGES = {
    "index.html": page(
        "Language Technologies Institute | Carnegie Mellon University",
        ["The Language Technologies Institute at Carnegie Mellon University in Pittsburgh is a research institute "
         "in the School of Computer Science. " + FILLER],
        [("about.html", "About"), ("programs.html", "Programs"), ("news.html", "News"), ("people.html", "People"),
         ("junk_short.html", "Quick note"), ("missing.html", "Archive"), ("#top", "Back to top")],
    ),
    "about.html": page(
        "About the LTI",
        ["The institute was founded at Carnegie Mellon in 1986 and has grown into one of the largest groups "
         "studying language. " + FILLER],
        [("history.html", "History"), ("campus.html", "Campus")],
    ),
    "programs.html": page(
        "Academic Programs",
        ["Carnegie Mellon offers doctoral and master's programs in language technologies, with courses taught "
         "by LTI faculty. " + FILLER],
        [("mlt.html", "MLT"), ("phd.html", "PhD"), ("catalog.pdf", "Course catalog (PDF)")],
    ),
    "news.html": page(
        "Latest Stories",
        ["Recent stories from around the department: new grants, awards and student achievements are posted "
         "here every week. Our researchers presented twelve papers at recent international conferences and "
         "two teams won best paper awards this season."],
        [("carnival.html", "Spring festival"), ("notfound_page.html", "Old event")],
        nav=False,
    ),
    "people.html": page(
        "People",
        ["Faculty, staff and students of the Carnegie Mellon Language Technologies Institute. " + FILLER],
        [("stanford.html", "Visiting scholar"), ("faculty.html", "Faculty directory")],
    ),
    "junk_short.html": page("Note", ["CMU note."], nav=False),
    "history.html": page(
        "History",
        ["Research on machine translation at Carnegie Mellon began in the 1980s with the Center for Machine "
         "Translation. " + FILLER],
        [("founders.html", "Founders")],
    ),
    "campus.html": page(
        "Campus",
        ["The Pittsburgh campus hosts the Gates and Hillman Centers where most LTI labs are located. " + FILLER],
        [("map.html", "Campus map")],
    ),
    "mlt.html": page(
        "Master of Language Technologies",
        ["The MLT program at Carnegie Mellon is a research-oriented master's degree lasting two years. " + FILLER],
        [("courses.html", "Courses")],
    ),
    "phd.html": page(
        "PhD in Language and Information Technologies",
        ["Doctoral students at CMU complete coursework, a qualifying process and a thesis. " + FILLER],
    ),
    "carnival.html": page(
        "Spring Carnival",
        ["Spring Carnival is a Carnegie Mellon tradition with booths, buggy races and the Scotty mascot. " + FILLER],
        [("booth.html", "Booth")],
    ),
    "notfound_page.html": page(
        "Page_not_found",
        ["The Carnegie Mellon University page you requested could not be found. " + FILLER],
        nav=False,
    ),
    "stanford.html": page(
        "Visitor",
        ["Welcome to Stanford. This page describes a visiting scholar program hosted in California with "
         "seminars, reading groups and open office hours for prospective students interested in linguistics, "
         "statistics and related areas of study."],
        nav=False,
    ),
    "faculty.html": page(
        "Faculty Directory",
        ["The Carnegie Mellon faculty directory lists professors, research scientists and their areas. " + FILLER],
    ),
    "founders.html": page("Founders", ["Carnegie Mellon founders of the institute. " + FILLER]),
    "map.html": page("Map", ["Carnegie Mellon campus map and directions. " + FILLER]),
    "courses.html": page("Courses", ["Carnegie Mellon course listings for language technologies. " + FILLER]),
    "booth.html": page("Booth", ["Carnival booth themes at Carnegie Mellon. " + FILLER]),
    "orphan.html": page("Orphan", ["An unlinked Carnegie Mellon page. " + FILLER]),
}


def main():
    os.makedirs(OUT, exist_ok=True)
    for name, html in PAGES.items():
        with open(os.path.join(OUT, name), "w", encoding="utf-8") as f:
            f.write(html)
    shutil.copyfile(os.path.join(HERE, "pdf", "catalog.pdf"), os.path.join(OUT, "catalog.pdf"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
