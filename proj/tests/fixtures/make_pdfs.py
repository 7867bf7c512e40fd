"""Regenerates the fixture PDFs. Output is committed; reportlab is only needed to rebuild."""
import os
import sys

from reportlab.lib.pagesizes import letter
from reportlab.pdfgen import canvas
from reportlab.rl_config import defaultPageSize  # noqa: F401

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "pdf")


def make(name, pages, title=None, compress=0, invariant=1):
    c = canvas.Canvas(os.path.join(OUT, name), pagesize=letter, pageCompression=compress, invariant=invariant)
    if title is not None:
        c.setTitle(title)
    for lines in pages:
        y = 720
        for line in lines:
            c.drawString(72, y, line)
            y -= 16
        c.showPage()
    c.save()


def make_image_only(name):
    c = canvas.Canvas(os.path.join(OUT, name), pagesize=letter, invariant=1)
    # A filled shape stands in for a scanned page: no text operators at all.
    c.setFillGray(0.3)
    c.rect(72, 400, 300, 300, fill=1)
    c.showPage()
    c.save()


def main():
    os.makedirs(OUT, exist_ok=True)
    make("hello.pdf", [["hello world"]])
    make("three_pages.pdf", [["first page"], ["second page"], ["third page"]], title="Three Pages", compress=1)
    make("multiline.pdf", [["Carnegie Mellon University", "Pittsburgh, PA 15213", "Café menu – daily"]],
         compress=1)
    make_image_only("scanned.pdf")
    catalog = [
        "Carnegie Mellon University Course Catalog 2024",
        "The Language Technologies Institute offers graduate programs in language technologies,",
        "machine translation, speech processing, information retrieval and natural language processing.",
        "Students in Pittsburgh take core courses during their first two semesters on campus.",
    ]
    make("catalog.pdf", [catalog, ["Appendix: course numbering follows the university registrar rules."]],
         title="CMU Course Catalog", compress=1)
    return 0


if __name__ == "__main__":
    sys.exit(main())
