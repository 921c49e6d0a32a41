"""Regenerates the fixture corpus under fixtures/corpus (pages, site HTML, routes)."""
import json
import random
import string
import unicodedata
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2] / "fixtures" / "corpus"
rng = random.Random(20181218)

LABELS = {
    "true": "True", "false": "False", "mostly-true": "Mostly True", "mostly-false": "Mostly False",
    "outdated": "Outdated", "miscaptioned": "Miscaptioned", "mis-captioned": "Mis-captioned",
    "misattributed": "Misattributed", "unproven": "Unproven", "mixture": "Mixture",
    "legend": "Legend", "scam": "Scam", "correct-attribution": "Correct Attribution",
    "satire": "Satire",
}

# (slug, question in the post, claim, origin HTML)
CLAIMS = [
    ("false", "Was Bill O'Reilly found dead at his Long Island home?",
     "Former Fox News host Bill O'Reilly was found dead on Long Island.",
     "<p>On 21 May 2017, the Daily USA Update web site published an article purporting to reveal "
     "&#8220;more details about the sad death&#8221; of former Fox News anchor Bill O&#8217;Reilly:</p>\n"
     "<blockquote><p>The Islip Coroner&#8217;s Office stated that last night, a neighbor called "
     "emergency services.</p></blockquote>\n"
     "<p>No coroner&#8217;s office by that name exists, and O&#8217;Reilly appeared on a podcast "
     "the following week.</p>"),
    ("true", "Did a lottery winner really share the jackpot with a store clerk?",
     "A Michigan lottery winner split a $1 million prize with the clerk who sold the ticket.",
     "<p>The state lottery commission confirmed the split payout in a press release.</p>"),
    ("mostly-false", "Does drinking cold water after meals cause cancer?",
     "Drinking cold water after a meal causes cancer by solidifying oils in the stomach.",
     "<p>A chain letter has circulated since 2004 warning diners about cold water.</p>\n"
     "<p>Oncologists say there is no mechanism by which this could occur.</p>"),
    ("mostly-true", "Did a city council ban plastic straws from all restaurants?",
     "The city council voted to ban plastic straws in restaurants, with medical exemptions.",
     "<p>The ordinance passed 7&ndash;2 and includes exemptions for customers who need them.</p>"),
    ("outdated", "Is the famous bridge still closed for repairs?",
     "The old river bridge is closed to traffic for structural repairs.",
     "<p>The bridge reopened in March after a two-year renovation.</p>"),
    ("mis-captioned", "Does this photo show flooding from last week's storm?",
     "A photograph shows a shark swimming on a flooded highway during the hurricane.",
     "<p>The image is a composite that has been shared after nearly every major storm since 2011.</p>"),
    ("misattributed", "Did Einstein really say this about insanity?",
     "Albert Einstein said insanity is doing the same thing over and over and expecting different results.",
     "<p>The quote does not appear in any of Einstein&#8217;s writings; it was first printed in a 1981 pamphlet.</p>"),
    ("unproven", "Did a celebrity secretly fund the new stadium?",
     "A famous singer anonymously donated the money used to build the new stadium.",
     "<p>Neither the team nor the singer&#8217;s representatives responded to our inquiries.</p>"),
    ("mixture", "Are the new tax rules good news for renters?",
     "The new tax law lowers taxes for renters and eliminates the renter credit.",
     "<p>Some provisions lower rates while others remove deductions, so the effect varies.</p>"),
    ("legend", "Do alligators really live in the city sewers?",
     "Alligators live in the sewers beneath New York City.",
     "<p>Stories of sewer alligators date back to the 1930s and remain a popular urban legend.</p>"),
    ("scam", "Is a supermarket giving away free gift cards on social media?",
     "A supermarket chain is giving away free $100 gift cards to anyone who shares a post.",
     "<p>The posts link to a survey page that harvests personal information. "
     "The company warned customers about the fraud.</p>"),
    ("correct-attribution", "Did Mark Twain write this line about the weather?",
     "Mark Twain wrote that climate is what we expect and weather is what we get.",
     "<p>The line appears in <em>Following the Equator</em> (1897).</p>"),
    ("false", "Did a senator propose taxing rainwater?",
     "A senator introduced a bill that would tax homeowners for collecting rainwater.",
     "<p>No such bill exists in the congressional record.</p>"),
    ("false", "Was a beloved actor arrested for a terrible crime?",
     "A beloved television actor was arrested for a terrible and shocking crime.",
     "<p>The story originated on a hoax site that mimics a national news outlet.</p>"),
    ("true", "Did a dog really ride the bus by itself every day?",
     "A black labrador in Seattle rides the city bus alone to the dog park.",
     "<p>Transit officials and the dog&#8217;s owner confirmed the happy habit.</p>"),
    ("miscaptioned", "Does this video show a protest from yesterday?",
     "A video shows an angry crowd protesting the new law yesterday.",
     "<p>The footage was recorded at a sports celebration in 2016.</p>"),
    ("false", "Did scientists find a cure for the common cold?",
     "Scientists have discovered a perfect cure for the common cold.",
     "<p>The article misrepresented an early laboratory study.</p>"),
    ("mostly-false", "Are schools really banning birthday parties?",
     "Public schools nationwide have banned birthday celebrations.",
     "<p>A single district adopted a policy limiting food in classrooms.</p>"),
    ("unproven", "Did a ghost appear in the museum's security footage?",
     "Security cameras captured a ghost walking through the museum at night.",
     "<p>The museum has not released the footage for independent review.</p>"),
    ("scam", "Can you really get paid to test new phones?",
     "A company will pay you to keep and test new smartphones for free.",
     "<p>The offer requires a credit card number and enrolls victims in a recurring subscription.</p>"),
    ("legend", "Is there a secret room behind the monument?",
     "A secret chamber behind the monument holds a hidden archive of national records.",
     "<p>The chamber was planned but never completed; it contains no records.</p>"),
    ("true", "Did a teenager build a working satellite in her garage?",
     "A teenager built a small working satellite that was launched into orbit.",
     "<p>The satellite was carried aboard a commercial launch as part of an education program.</p>"),
    ("mixture", "Is this common food additive really dangerous?",
     "A common food additive is dangerous and is banned in Europe.",
     "<p>The additive is restricted, not banned, and the health evidence is mixed.</p>"),
    ("outdated", "Is the airline still offering free checked bags?",
     "The airline lets every passenger check two bags for free.",
     "<p>The policy ended in 2017.</p>"),
]

NEWS_PAGE = """<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>{title}</title></head>
<body>
<header class="site-header"><nav><ul><li><a href="/">Home</a><li><a href="/news/">News</a></ul></nav></header>
<main><article class="post"><h1 class="title">{title}</h1>
<div class="card-body"><p>{body}</p></div>
</article></main>
</body></html>
"""

FACT_CHECK_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>FACT CHECK: {title}</title>
<script>window.dataLayer = window.dataLayer || []; if (a < b && c > d) {{ dataLayer.push("<p class='claim'>x</p>"); }}</script>
<style>.claim {{ font-weight: bold; }} .rating-name > span {{ color: red; }}</style>
</head>
<body>
<header class="site-header"><nav><ul><li><a href="/">Home</a><li><a href="/fact-check/">Fact Checks</a></ul></nav></header>
<main>
<article class="post">
<h1 class="title">{title}</h1>
<div class="claim-wrapper card">
<h3 class="card-header">Claim</h3>
<div class="card-body"><p class="claim">
{claim}</p></div>
</div>
{rating_block}
<div class="post-body-card post-card card">
<h3 class="card-header"> Origin</h3>
<div class="card-body">
{origin}
</div>
</div>
</article>
</main>
<footer>&copy; 1995-2018 by Snopes Media Group Inc. <br> All rights reserved.</footer>
</body></html>
"""

RATING_BLOCK = """<div class="media rating-wrapper card">
<a href="/fact-check-ratings/#{slug}"><img src="/img/rating-{slug}.png" alt="{label}"></a>
<div class="media-body"><h5>Rating</h5>
<span class="rating-name rating-label-{slug}">{label}</span></div>
</div>"""


def esc(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def tco():
    return "https://t.co/" + "".join(rng.choice(string.ascii_letters + string.digits) for _ in range(10))


def slugify(text):
    text = unicodedata.normalize("NFKD", text)
    words = "".join(c.lower() if c.isascii() and c.isalnum() else " " for c in text if not unicodedata.combining(c)).split()
    return "-".join(words[:6])


routes = {}
html_dir = ROOT / "site" / "html"
html_dir.mkdir(parents=True, exist_ok=True)
for old in html_dir.glob("*.html"):
    old.unlink()


def add_page(url, name, html):
    (html_dir / name).write_text(html, encoding="utf-8")
    routes[url] = {"status": 200, "file": "html/" + name}


def redirect(short, target, status=301):
    routes[short] = {"status": status, "location": target}


def fact_check(idx, claim, rated=True):
    slug, question, text, origin = claim
    page_slug = "bill-oreilly-found-dead" if idx == 0 else slugify(text)
    url = "https://www.snopes.com/fact-check/" + page_slug + "/"
    block = RATING_BLOCK.format(slug=slug, label=LABELS[slug]) if rated else \
        '<div class="media rating-wrapper card"><div class="media-body"><h5>Rating</h5><p>Research in progress</p></div></div>'
    add_page(url, page_slug + ".html",
             FACT_CHECK_PAGE.format(title=esc(question), claim=esc(text), rating_block=block, origin=origin))
    return url


def photo_page(status_id):
    url = "https://twitter.com/snopes/status/%d/photo/1" % status_id
    add_page(url, "photo-%d.html" % status_id,
             NEWS_PAGE.format(title="snopes on Twitter", body="Photo attached to a post."))
    return url


class Feed:
    def __init__(self):
        self.next_id = 1075020507186126853 + 40 * 9173
        self.next_ms = 1545139836000 + 40 * 3_600_000

    def record(self, text, rid=None, ms=None):
        rid = rid if rid is not None else self.next_id
        ms = ms if ms is not None else self.next_ms
        self.next_id -= 9173
        self.next_ms -= 3_600_000
        return {
            "tweets": text, "id": rid, "len": len(text), "date": ms, "source": "AgoraPulse Manager",
            "likes": rng.randint(0, 120), "retweets": rng.randint(0, 60), "time": ms,
            "geo": None, "sentiment": rng.choice([-1, 0, 1]),
        }


feed = Feed()


def claim_post(idx, rated=True, question=None):
    claim = CLAIMS[idx]
    target = fact_check(idx, claim, rated)
    short, photo = tco(), tco()
    rec = feed.record("%s %s %s" % (question or claim[1], short, photo))
    redirect(short, target)
    redirect(photo, photo_page(rec["id"]))
    return rec


page1 = {}
news = [
    ("Happy holidays from everyone at the newsroom!", None),
    ("Our weekly newsletter is out.", ("newsletter", "Newsletter", "This week in fact checks.")),
    ("We're hiring an editor.", ("careers", "Careers", "Open positions.")),
    ("Send us your tips at snopes.com/tips and we will take a look.", None),
    ("A look back at the strangest rumors of the year.", ("year-in-review", "Year in Review", "The top rumors.")),
    ("Thank you to all of our members for your support!", None),
    ("The story we covered earlier has been updated.", ("dead-link", None, None)),
    ("Listen to our new podcast episode.", ("podcast", "Podcast", "Episode 12.")),
]
for i, (text, page) in enumerate(news):
    if page is None:
        page1[str(i)] = feed.record(text)
        continue
    short = tco()
    name, title, body = page
    url = "https://www.snopes.com/news/2018/12/%s/" % name
    if title is None:
        routes[url] = {"status": 404, "body": "Not Found"}
    else:
        add_page(url, "news-%s.html" % name, NEWS_PAGE.format(title=title, body=body))
    redirect(short, url)
    page1[str(i)] = feed.record("%s %s" % (text, short))

# Record 8 mirrors the collected sample exactly.
oreilly = CLAIMS[0]
target = fact_check(0, oreilly)
redirect("https://t.co/SGwagACMbW", target)
redirect("https://t.co/Ppx1FhJeMm", photo_page(1075020507186126853))
text = "Was Bill O'Reilly found dead at his Long Island home? https://t.co/SGwagACMbW https://t.co/Ppx1FhJeMm"
page1["8"] = {
    "tweets": text, "id": 1075020507186126853, "len": 101, "date": 1545139836000,
    "source": "AgoraPulse Manager", "likes": 4, "retweets": 2, "time": 1545139836000,
    "geo": None, "sentiment": -1,
    "token_list": ["Was", "Bill", "O", "Reilly", "found", "dead", "Long", "Island", "home"],
}
feed.next_id = 1075020507186126853 - 9173
feed.next_ms = 1545139836000 - 3_600_000
for k, idx in enumerate(range(1, 13)):
    page1[str(9 + k)] = claim_post(idx)

page2 = {}
for k, idx in enumerate(range(13, len(CLAIMS))):
    page2[str(k)] = claim_post(idx)
n = len(page2)
# Same post collected twice across pages.
page2[str(n)] = dict(page1["12"])
# A second post pointing at an already checked claim.
short = tco()
redirect(short, "https://www.snopes.com/fact-check/" + slugify(CLAIMS[2][2]) + "/")
page2[str(n + 1)] = feed.record("Still seeing this one shared. Here is why it is wrong: " + short)
# Rating outside the taxonomy.
satire = ("satire", "Did the president really adopt a pet dinosaur?",
          "The president adopted a pet dinosaur from a museum.", "<p>The story came from a satirical site.</p>")
CLAIMS.append(satire)
page2[str(n + 2)] = claim_post(len(CLAIMS) - 1)
# Claim page without a rating yet.
pending = ("false", "Is a new coin being minted with a cartoon on it?",
           "The mint is producing a coin featuring a cartoon character.", "<p>We are still researching this.</p>")
CLAIMS.append(pending)
page2[str(n + 3)] = claim_post(len(CLAIMS) - 1, rated=False)
# A redirect through a second shortener hop and a non-ASCII post.
short, mid = tco(), "https://bit.ly/2Snopes7"
target = fact_check(len(CLAIMS), ("true", "", "Café owners in Montréal gave free coffee to stranded travelers.",
                                  "<p>The caf&eacute; posted photos of the line on its page.</p>"))
redirect(short, mid)
redirect(mid, target, 302)
page2[str(n + 4)] = feed.record("Did a café really serve free coffee to stranded travelers? " + short)

(ROOT / "pages").mkdir(parents=True, exist_ok=True)
for name, page in (("page_01.json", page1), ("page_02.json", page2)):
    with open(ROOT / "pages" / name, "w", encoding="utf-8") as f:
        json.dump(page, f, indent=4, ensure_ascii=False)
        f.write("\n")
with open(ROOT / "site" / "routes.json", "w", encoding="utf-8") as f:
    json.dump(dict(sorted(routes.items())), f, indent=2, ensure_ascii=False)
    f.write("\n")
print(len(page1), len(page2), len(routes))
