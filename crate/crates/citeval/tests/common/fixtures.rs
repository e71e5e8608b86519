//! Hand-traced golden corpus: Markdown in, expected registry and
//! attributions out. Covers numbered references, ranges, footnotes, inline
//! links and autolinks, plus masking, propagation and dedup behavior.

pub struct Golden {
    pub name: &'static str,
    pub markdown: &'static str,
    /// Expected registry URLs in id order (id = index + 1).
    pub citations: &'static [&'static str],
    /// Expected (text_nocite, citation_ids) in document order.
    pub attributions: &'static [(&'static str, &'static [u64])],
}

pub const GOLDEN_CORPUS: &[Golden] = &[
    Golden {
        name: "numbered_basic",
        markdown: "The sky is blue. [1]\n\n[1]: https://a.example/sky\n",
        citations: &["https://a.example/sky"],
        attributions: &[("The sky is blue.", &[1])],
    },
    Golden {
        name: "numbered_pair",
        markdown: "Solar grew fast. [1] Wind grew faster. [2]\n\n[1]: https://a.example/solar\n[2]: https://b.example/wind\n",
        citations: &["https://a.example/solar", "https://b.example/wind"],
        attributions: &[("Solar grew fast.", &[1]), ("Wind grew faster.", &[2])],
    },
    Golden {
        name: "backward_propagation",
        markdown: "Rain fell early. Snow fell later. [1]\n\n[1]: https://a.example/weather\n",
        citations: &["https://a.example/weather"],
        attributions: &[("Rain fell early.", &[1]), ("Snow fell later.", &[1])],
    },
    Golden {
        name: "propagation_blocked_by_cited_sentence",
        markdown: "First fact holds. [1] Second fact holds. [2]\n\n[1]: https://a.example/one\n[2]: https://b.example/two\n",
        citations: &["https://a.example/one", "https://b.example/two"],
        attributions: &[("First fact holds.", &[1]), ("Second fact holds.", &[2])],
    },
    Golden {
        name: "range_expansion",
        markdown: "Vitamins help people. [1-3]\n\n[1]: https://a.example/v1\n[2]: https://b.example/v2\n[3]: https://c.example/v3\n",
        citations: &[
            "https://a.example/v1",
            "https://b.example/v2",
            "https://c.example/v3",
        ],
        attributions: &[("Vitamins help people.", &[1, 2, 3])],
    },
    Golden {
        name: "range_collapsing_to_one_url",
        markdown: "Twin facts stand. [1-2]\n\n[1]: https://a.example/same\n[2]: https://a.example/same\n",
        citations: &["https://a.example/same"],
        attributions: &[("Twin facts stand.", &[1])],
    },
    Golden {
        name: "footnote_with_link_definition",
        markdown: "Oceans are warming.[^w]\n\n[^w]: see [report](https://a.example/ocean)\n",
        citations: &["https://a.example/ocean"],
        attributions: &[("Oceans are warming.", &[1])],
    },
    Golden {
        name: "footnote_with_bare_url",
        markdown: "Ice sheets melt.[^i]\n\n[^i]: https://b.example/ice with commentary\n",
        citations: &["https://b.example/ice"],
        attributions: &[("Ice sheets melt.", &[1])],
    },
    Golden {
        name: "inline_link_midsentence",
        markdown: "Per [the census](https://c.example/pop), cities grew fast.\n",
        citations: &["https://c.example/pop"],
        attributions: &[("Per the census, cities grew fast.", &[1])],
    },
    Golden {
        name: "autolink_midsentence",
        markdown: "See <https://d.example/data> for the numbers.\n",
        citations: &["https://d.example/data"],
        attributions: &[("See for the numbers.", &[1])],
    },
    Golden {
        name: "autolink_trailing",
        markdown: "GDP rose sharply. <https://e.example/gdp>\n",
        citations: &["https://e.example/gdp"],
        attributions: &[("GDP rose sharply.", &[1])],
    },
    Golden {
        name: "dedup_across_syntaxes",
        markdown: "Stat one stands. [1] Stat two per [src](https://a.example/shared) data.\n\n[1]: https://a.example/shared\n",
        citations: &["https://a.example/shared"],
        attributions: &[
            ("Stat one stands.", &[1]),
            ("Stat two per src data.", &[1]),
        ],
    },
    Golden {
        name: "inline_code_masked",
        markdown: "Use `cmd [9]` carefully. Real citation here. [1]\n\n[1]: https://a.example/cite\n",
        citations: &["https://a.example/cite"],
        attributions: &[
            ("Use `cmd [9]` carefully.", &[1]),
            ("Real citation here.", &[1]),
        ],
    },
    Golden {
        name: "fenced_code_masked",
        markdown: "```\n[1](https://x.example/fake)\n```\n\nOutside claim stated. [1]\n\n[1]: https://a.example/real\n",
        citations: &["https://a.example/real"],
        attributions: &[("Outside claim stated.", &[1])],
    },
    Golden {
        name: "code_only_document",
        markdown: "```\n[1]: https://a.example/x\nClaim inside. [1]\n```\n",
        citations: &[],
        attributions: &[],
    },
    Golden {
        name: "heading_markers_ignored",
        markdown: "# Results [1]\n\nBody fact holds. [1]\n\n[1]: https://a.example/r\n",
        citations: &["https://a.example/r"],
        attributions: &[("Body fact holds.", &[1])],
    },
    Golden {
        name: "references_section_resolution",
        markdown: "Claim alpha holds. [1] Claim beta holds. [2]\n\n## References\n\n1. [Alpha source](https://a.example/alpha)\n2. [Beta source](https://b.example/beta)\n",
        citations: &["https://a.example/alpha", "https://b.example/beta"],
        attributions: &[
            ("Claim alpha holds.", &[1]),
            ("Claim beta holds.", &[2]),
        ],
    },
    Golden {
        name: "definitions_win_over_reference_list",
        markdown: "Claim gamma holds. [1]\n\n[1]: https://a.example/def\n\n## Sources\n\n1. [Other](https://b.example/list)\n",
        citations: &["https://a.example/def"],
        attributions: &[("Claim gamma holds.", &[1])],
    },
    Golden {
        name: "list_items_as_passages",
        markdown: "- Point one holds. [1]\n- Point two holds. [2]\n\n[1]: https://a.example/p1\n[2]: https://b.example/p2\n",
        citations: &["https://a.example/p1", "https://b.example/p2"],
        attributions: &[("Point one holds.", &[1]), ("Point two holds.", &[2])],
    },
    Golden {
        name: "propagation_stops_at_paragraph",
        markdown: "Uncited paragraph stands alone.\n\nCited paragraph follows. [1]\n\n[1]: https://a.example/c\n",
        citations: &["https://a.example/c"],
        attributions: &[("Cited paragraph follows.", &[1])],
    },
    Golden {
        name: "unresolved_label_excluded",
        markdown: "Claim delta holds. [7]\n",
        citations: &[],
        attributions: &[],
    },
    Golden {
        name: "descending_range_endpoints",
        markdown: "Claim epsilon holds. [3-1]\n\n[1]: https://a.example/e1\n[3]: https://c.example/e3\n",
        citations: &["https://c.example/e3", "https://a.example/e1"],
        attributions: &[("Claim epsilon holds.", &[1, 2])],
    },
    Golden {
        name: "abbreviation_guard",
        markdown: "Dr. Smith confirmed the result. [1]\n\n[1]: https://a.example/dr\n",
        citations: &["https://a.example/dr"],
        attributions: &[("Dr. Smith confirmed the result.", &[1])],
    },
    Golden {
        name: "duplicate_marker_dedup",
        markdown: "Fact zeta holds. [1][1]\n\n[1]: https://a.example/z\n",
        citations: &["https://a.example/z"],
        attributions: &[("Fact zeta holds.", &[1])],
    },
    Golden {
        name: "mixed_syntaxes_one_sentence",
        markdown: "Both [a](https://a.example/m1) and <https://b.example/m2> agree fully.\n",
        citations: &["https://a.example/m1", "https://b.example/m2"],
        attributions: &[("Both a and agree fully.", &[1, 2])],
    },
    Golden {
        name: "uncited_tail_dropped",
        markdown: "Cited start holds. [1] Uncited tail follows here.\n\n[1]: https://a.example/t\n",
        citations: &["https://a.example/t"],
        attributions: &[("Cited start holds.", &[1])],
    },
    Golden {
        name: "crlf_normalized",
        markdown: "Line one fact. [1]\r\n\r\n[1]: https://a.example/crlf\r\n",
        citations: &["https://a.example/crlf"],
        attributions: &[("Line one fact.", &[1])],
    },
    Golden {
        name: "unicode_path_percent_encoded",
        markdown: "Unicode claim w\u{f6}rks. [1]\n\n[1]: https://a.example/\u{fc}\n",
        citations: &["https://a.example/%C3%BC"],
        attributions: &[("Unicode claim w\u{f6}rks.", &[1])],
    },
    Golden {
        name: "fragment_variants_dedup",
        markdown: "One stat holds. [1] Two stat holds. [2]\n\n[1]: https://a.example/page#intro\n[2]: https://a.example/page#methods\n",
        citations: &["https://a.example/page"],
        attributions: &[("One stat holds.", &[1]), ("Two stat holds.", &[1])],
    },
    Golden {
        name: "multiline_paragraph_collapsed",
        markdown: "A claim spanning\ntwo lines cleanly. [1]\n\n[1]: https://a.example/ml\n",
        citations: &["https://a.example/ml"],
        attributions: &[("A claim spanning two lines cleanly.", &[1])],
    },
];
