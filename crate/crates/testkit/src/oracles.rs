//! Reference scorers, one per metric, written as plain loops over token
//! vectors. Each function pins the exact definition the optimized
//! implementations must reproduce.

/// Word tokenizer shared by all word-level reference scorers: lower-case,
/// alphanumeric runs become tokens, every other non-space character becomes
/// its own single-character token.
pub fn tokenize_words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            for lc in ch.to_lowercase() {
                cur.push(lc);
            }
        } else {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Stopword list for the alignment cosine. Duplicated verbatim from the main
/// crate on purpose: the two sides must agree on the definition without
/// sharing code.
pub const STOPWORDS: &[&str] = &[
    "a", "an", "the", "and", "or", "but", "if", "then", "else", "when",
    "while", "of", "at", "by", "for", "with", "about", "between", "into",
    "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "once",
    "here", "there", "all", "any", "both", "each", "few", "more", "most",
    "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
    "than", "too", "very", "can", "will", "just", "is", "are", "was", "were",
    "be", "been", "being", "have", "has", "had", "having", "do", "does",
    "did", "doing", "it", "its", "this", "that", "these", "those", "as",
];

fn alnum_stop_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            for lc in ch.to_lowercase() {
                cur.push(lc);
            }
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out.retain(|t| !STOPWORDS.contains(&t.as_str()));
    out
}

/// Term-frequency cosine over stopword-filtered lower-cased alphanumeric
/// tokens. Zero when either side has no surviving tokens. The denominator
/// is sqrt(na*nb) — exact for identical vectors since the counts are
/// integers — and the ratio is capped at 1.
pub fn cosine_oracle(a: &str, b: &str) -> f64 {
    let ta = alnum_stop_tokens(a);
    let tb = alnum_stop_tokens(b);
    if ta.is_empty() || tb.is_empty() {
        return 0.0;
    }
    let mut vocab: Vec<&String> = ta.iter().chain(tb.iter()).collect();
    vocab.sort();
    vocab.dedup();
    let mut dot = 0.0f64;
    let mut na = 0.0f64;
    let mut nb = 0.0f64;
    for w in vocab {
        let ca = ta.iter().filter(|t| *t == w).count() as f64;
        let cb = tb.iter().filter(|t| *t == w).count() as f64;
        dot += ca * cb;
        na += ca * ca;
        nb += cb * cb;
    }
    (dot / (na * nb).sqrt()).min(1.0)
}

fn ngrams(tokens: &[String], n: usize) -> Vec<Vec<String>> {
    if n == 0 || tokens.len() < n {
        return Vec::new();
    }
    tokens.windows(n).map(|w| w.to_vec()).collect()
}

fn clipped_matches(hyp: &[Vec<String>], reference: &[Vec<String>]) -> usize {
    let mut seen: Vec<&Vec<String>> = Vec::new();
    let mut total = 0usize;
    for g in hyp {
        if seen.contains(&g) {
            continue;
        }
        seen.push(g);
        let h = hyp.iter().filter(|x| *x == g).count();
        let r = reference.iter().filter(|x| *x == g).count();
        total += h.min(r);
    }
    total
}

/// Sentence BLEU-4. Unigram precision is unsmoothed (zero overlap means zero
/// score); orders 2..=4 use add-one smoothing (m+1)/(c+1). Brevity penalty
/// min(1, exp(1 - r/c)). Log terms are summed in ascending n order and the
/// penalty is applied last.
pub fn sentence_bleu_oracle(hyp: &str, reference: &str) -> f64 {
    let h = tokenize_words(hyp);
    let r = tokenize_words(reference);
    if h.is_empty() {
        return 0.0;
    }
    let h1 = ngrams(&h, 1);
    let r1 = ngrams(&r, 1);
    let m1 = clipped_matches(&h1, &r1);
    if m1 == 0 {
        return 0.0;
    }
    let mut log_sum = (m1 as f64 / h1.len() as f64).ln();
    for n in 2..=4usize {
        let hn = ngrams(&h, n);
        let rn = ngrams(&r, n);
        let m = clipped_matches(&hn, &rn);
        log_sum += ((m as f64 + 1.0) / (hn.len() as f64 + 1.0)).ln();
    }
    let bp = if h.len() >= r.len() {
        1.0
    } else {
        (1.0 - r.len() as f64 / h.len() as f64).exp()
    };
    bp * (0.25 * log_sum).exp()
}

/// Corpus BLEU-4 with no smoothing: clipped match and candidate totals are
/// accumulated per order over all pairs; any zero precision zeroes the score.
pub fn corpus_bleu_oracle(pairs: &[(String, String)]) -> f64 {
    let mut log_sum = 0.0f64;
    let mut hyp_len = 0usize;
    let mut ref_len = 0usize;
    let mut precisions = Vec::new();
    for n in 1..=4usize {
        let mut m_total = 0usize;
        let mut c_total = 0usize;
        for (hyp, reference) in pairs {
            let h = tokenize_words(hyp);
            let r = tokenize_words(reference);
            if n == 1 {
                hyp_len += h.len();
                ref_len += r.len();
            }
            let hn = ngrams(&h, n);
            let rn = ngrams(&r, n);
            m_total += clipped_matches(&hn, &rn);
            c_total += hn.len();
        }
        if c_total == 0 || m_total == 0 {
            return 0.0;
        }
        precisions.push(m_total as f64 / c_total as f64);
    }
    for p in precisions {
        log_sum += p.ln();
    }
    if hyp_len == 0 {
        return 0.0;
    }
    let bp = if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    bp * (0.25 * log_sum).exp()
}

fn f_beta(p: f64, r: f64, beta2: f64) -> f64 {
    if p + r == 0.0 {
        return 0.0;
    }
    let denom = beta2 * p + r;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + beta2) * p * r / denom
    }
}

/// ROUGE-N precision/recall/F1 via clipped n-gram overlap.
pub fn rouge_n_oracle(hyp: &str, reference: &str, n: usize) -> (f64, f64, f64) {
    let hn = ngrams(&tokenize_words(hyp), n);
    let rn = ngrams(&tokenize_words(reference), n);
    if hn.is_empty() || rn.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let m = clipped_matches(&hn, &rn) as f64;
    let p = m / hn.len() as f64;
    let r = m / rn.len() as f64;
    (p, r, f_beta(p, r, 1.0))
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            dp[i][j] = if a[i - 1] == b[j - 1] {
                dp[i - 1][j - 1] + 1
            } else {
                dp[i - 1][j].max(dp[i][j - 1])
            };
        }
    }
    dp[a.len()][b.len()]
}

/// ROUGE-L precision/recall/F1 via sequence-level LCS.
pub fn rouge_l_oracle(hyp: &str, reference: &str) -> (f64, f64, f64) {
    let h = tokenize_words(hyp);
    let r = tokenize_words(reference);
    if h.is_empty() || r.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let l = lcs_len(&r, &h) as f64;
    let p = l / h.len() as f64;
    let rec = l / r.len() as f64;
    (p, rec, f_beta(p, rec, 1.0))
}

/// Splits on '.', '!' or '?' followed by whitespace (or end of text), with
/// the figure tokens FIG./FIGS./Fig./Figs. protected from splitting.
pub fn split_sentences(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        if c == '.' || c == '!' || c == '?' {
            let next_ws = i + 1 >= chars.len() || chars[i + 1].is_whitespace();
            if next_ws && !(c == '.' && figure_dot(&chars, i)) {
                let s: String = chars[start..=i].iter().collect();
                let s = s.trim();
                if !s.is_empty() {
                    sentences.push(s.to_string());
                }
                start = i + 1;
            }
        }
        i += 1;
    }
    if start < chars.len() {
        let s: String = chars[start..].iter().collect();
        let s = s.trim();
        if !s.is_empty() {
            sentences.push(s.to_string());
        }
    }
    sentences
}

fn figure_dot(chars: &[char], dot: usize) -> bool {
    for token in ["FIGS", "FIG", "Figs", "Fig"] {
        let tl = token.len();
        if dot >= tl {
            let prefix: String = chars[dot - tl..dot].iter().collect();
            let boundary = dot == tl || !chars[dot - tl - 1].is_alphanumeric();
            if prefix == token && boundary {
                return true;
            }
        }
    }
    false
}

/// LCS matched positions in `reference` against `hyp`, using the
/// backtrack-from-the-end rule (ties drop the reference token).
fn lcs_ref_positions(reference: &[String], hyp: &[String]) -> Vec<usize> {
    let mut dp = vec![vec![0usize; hyp.len() + 1]; reference.len() + 1];
    for i in 1..=reference.len() {
        for j in 1..=hyp.len() {
            dp[i][j] = if reference[i - 1] == hyp[j - 1] {
                dp[i - 1][j - 1] + 1
            } else {
                dp[i - 1][j].max(dp[i][j - 1])
            };
        }
    }
    let mut positions = Vec::new();
    let (mut i, mut j) = (reference.len(), hyp.len());
    while i > 0 && j > 0 {
        if reference[i - 1] == hyp[j - 1] {
            positions.push(i - 1);
            i -= 1;
            j -= 1;
        } else if dp[i][j - 1] > dp[i - 1][j] {
            j -= 1;
        } else {
            i -= 1;
        }
    }
    positions.reverse();
    positions
}

/// ROUGE-Lsum: per reference sentence, the union of LCS-matched reference
/// positions against every hypothesis sentence; matched token counts are
/// clipped against the hypothesis token multiset before scoring.
pub fn rouge_lsum_oracle(hyp: &str, reference: &str) -> (f64, f64, f64) {
    let h_tokens = tokenize_words(hyp);
    let r_tokens = tokenize_words(reference);
    if h_tokens.is_empty() || r_tokens.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let h_sents: Vec<Vec<String>> = split_sentences(hyp)
        .iter()
        .map(|s| tokenize_words(s))
        .collect();
    let mut matched: Vec<String> = Vec::new();
    for rs in split_sentences(reference) {
        let r_sent = tokenize_words(&rs);
        let mut union: Vec<usize> = Vec::new();
        for hs in &h_sents {
            for pos in lcs_ref_positions(&r_sent, hs) {
                if !union.contains(&pos) {
                    union.push(pos);
                }
            }
        }
        for pos in union {
            matched.push(r_sent[pos].clone());
        }
    }
    // clip per-surface against hypothesis counts
    let mut surfaces: Vec<&String> = matched.iter().collect();
    surfaces.sort();
    surfaces.dedup();
    let mut hits = 0usize;
    for s in surfaces {
        let m = matched.iter().filter(|t| *t == s).count();
        let h = h_tokens.iter().filter(|t| *t == s).count();
        hits += m.min(h);
    }
    let p = hits as f64 / h_tokens.len() as f64;
    let r = hits as f64 / r_tokens.len() as f64;
    (p, r, f_beta(p, r, 1.0))
}

/// chrF with character orders 1..=char_n (default 6) and optional word
/// orders 1..=word_n, beta=2. Whitespace is removed before character
/// n-gramming; text is case-sensitive. Orders with no n-grams on either side
/// are skipped; the score is the arithmetic mean of the per-order F-scores.
/// Both-empty inputs score 1, half-empty inputs score 0.
pub fn chrf_oracle(hyp: &str, reference: &str, char_n: usize, word_n: usize, beta: f64) -> f64 {
    let hc: Vec<String> = hyp
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| c.to_string())
        .collect();
    let rc: Vec<String> = reference
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| c.to_string())
        .collect();
    if hc.is_empty() && rc.is_empty() {
        return 1.0;
    }
    if hc.is_empty() || rc.is_empty() {
        return 0.0;
    }
    let beta2 = beta * beta;
    let mut scores = Vec::new();
    for n in 1..=char_n {
        let hn = ngrams(&hc, n);
        let rn = ngrams(&rc, n);
        if hn.is_empty() && rn.is_empty() {
            continue;
        }
        if hn.is_empty() || rn.is_empty() {
            scores.push(0.0);
            continue;
        }
        let m = clipped_matches(&hn, &rn) as f64;
        scores.push(f_beta(m / hn.len() as f64, m / rn.len() as f64, beta2));
    }
    let hw = tokenize_words(hyp);
    let rw = tokenize_words(reference);
    for n in 1..=word_n {
        let hn = ngrams(&hw, n);
        let rn = ngrams(&rw, n);
        if hn.is_empty() && rn.is_empty() {
            continue;
        }
        if hn.is_empty() || rn.is_empty() {
            scores.push(0.0);
            continue;
        }
        let m = clipped_matches(&hn, &rn) as f64;
        scores.push(f_beta(m / hn.len() as f64, m / rn.len() as f64, beta2));
    }
    if scores.is_empty() {
        return 0.0;
    }
    scores.iter().sum::<f64>() / scores.len() as f64
}

/// Suffix-stripping stemmer used by the METEOR variant: first matching
/// suffix of ing/ed/ly/es/s is removed from words of length >= 4 when the
/// remaining stem keeps at least 3 characters.
pub fn light_stem(word: &str) -> String {
    if word.chars().count() >= 4 {
        for suf in ["ing", "ed", "ly", "es", "s"] {
            if let Some(stem) = word.strip_suffix(suf) {
                if stem.chars().count() >= 3 {
                    return stem.to_string();
                }
            }
        }
    }
    word.to_string()
}

/// METEOR variant: exact unigram matches first (leftmost unmatched reference
/// token per hypothesis token, left to right), then stem matches on the
/// leftovers. Fmean = P*R / (0.9P + 0.1R). Chunks are maximal runs adjacent
/// in both sequences; penalty 0.5*(chunks/matches)^3 applies only when more
/// than one chunk exists, so identical texts score exactly 1.
pub fn meteor_oracle(hyp: &str, reference: &str) -> f64 {
    let h = tokenize_words(hyp);
    let r = tokenize_words(reference);
    if h.is_empty() || r.is_empty() {
        return 0.0;
    }
    let mut ref_used = vec![false; r.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new(); // (hyp_pos, ref_pos)
    let mut hyp_used = vec![false; h.len()];
    for (i, tok) in h.iter().enumerate() {
        for (j, rtok) in r.iter().enumerate() {
            if !ref_used[j] && rtok == tok {
                ref_used[j] = true;
                hyp_used[i] = true;
                pairs.push((i, j));
                break;
            }
        }
    }
    let h_stem: Vec<String> = h.iter().map(|t| light_stem(t)).collect();
    let r_stem: Vec<String> = r.iter().map(|t| light_stem(t)).collect();
    for (i, tok) in h_stem.iter().enumerate() {
        if hyp_used[i] {
            continue;
        }
        for (j, rtok) in r_stem.iter().enumerate() {
            if !ref_used[j] && rtok == tok {
                ref_used[j] = true;
                hyp_used[i] = true;
                pairs.push((i, j));
                break;
            }
        }
    }
    let m = pairs.len();
    if m == 0 {
        return 0.0;
    }
    let p = m as f64 / h.len() as f64;
    let rec = m as f64 / r.len() as f64;
    let fmean = p * rec / (0.9 * p + 0.1 * rec);
    pairs.sort();
    let mut chunks = 1usize;
    for w in pairs.windows(2) {
        if !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1) {
            chunks += 1;
        }
    }
    let penalty = if chunks > 1 {
        let frag = chunks as f64 / m as f64;
        0.5 * frag * frag * frag
    } else {
        0.0
    };
    fmean * (1.0 - penalty)
}

/// Word-error rate: token-level Levenshtein distance over the shared
/// tokenizer, divided by the reference length. None when the reference is
/// empty but the hypothesis is not; two empty texts score 0.
pub fn wer_oracle(hyp: &str, reference: &str) -> Option<f64> {
    let h = tokenize_words(hyp);
    let r = tokenize_words(reference);
    if r.is_empty() {
        return if h.is_empty() { Some(0.0) } else { None };
    }
    let mut dp = vec![vec![0usize; h.len() + 1]; r.len() + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in dp[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=r.len() {
        for j in 1..=h.len() {
            let cost = if r[i - 1] == h[j - 1] { 0 } else { 1 };
            dp[i][j] = (dp[i - 1][j] + 1)
                .min(dp[i][j - 1] + 1)
                .min(dp[i - 1][j - 1] + cost);
        }
    }
    Some(dp[r.len()][h.len()] as f64 / r.len() as f64)
}

fn collect_ngram_list(tokens: &[String], n: usize) -> Vec<String> {
    ngrams(tokens, n).iter().map(|g| g.join(" ")).collect()
}

/// Corpus NIST with max_n=5. Information weights come from the reference
/// side of the very corpus being scored: info(g) = log2(count(prefix) /
/// count(g)) for orders >= 2 and log2(total_words / count(w)) for unigrams.
/// Per order, the clipped co-occurring n-grams contribute their info summed
/// in sorted n-gram order; the order term is that sum over the number of
/// hypothesis n-grams. Brevity factor exp(beta * ln(min(1, Lh/Lr))^2) with
/// beta = ln(0.5)/ln(1.5)^2.
pub fn nist_oracle(pairs: &[(String, String)], max_n: usize) -> f64 {
    let ref_tokens: Vec<Vec<String>> = pairs.iter().map(|(_, r)| tokenize_words(r)).collect();
    let hyp_tokens: Vec<Vec<String>> = pairs.iter().map(|(h, _)| tokenize_words(h)).collect();
    let mut sum = 0.0f64;
    for n in 1..=max_n {
        let mut num = 0.0f64;
        let mut den = 0usize;
        let mut contributions: Vec<(String, f64)> = Vec::new();
        for (h, r) in hyp_tokens.iter().zip(ref_tokens.iter()) {
            let hn = collect_ngram_list(h, n);
            let rn = collect_ngram_list(r, n);
            den += hn.len();
            let mut seen: Vec<&String> = Vec::new();
            for g in &hn {
                if seen.contains(&g) {
                    continue;
                }
                seen.push(g);
                let hc = hn.iter().filter(|x| *x == g).count();
                let rc = rn.iter().filter(|x| *x == g).count();
                let matched = hc.min(rc);
                if matched > 0 {
                    contributions.push((g.clone(), matched as f64 * nist_info(&ref_tokens, g, n)));
                }
            }
        }
        contributions.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, c) in contributions {
            num += c;
        }
        if den > 0 {
            sum += num / den as f64;
        }
    }
    let lh: usize = hyp_tokens.iter().map(|t| t.len()).sum();
    let lr: usize = ref_tokens.iter().map(|t| t.len()).sum();
    if lh == 0 || lr == 0 {
        return 0.0;
    }
    let beta = 0.5f64.ln() / (1.5f64.ln() * 1.5f64.ln());
    let ratio = (lh as f64 / lr as f64).min(1.0);
    let bp = (beta * ratio.ln() * ratio.ln()).exp();
    sum * bp
}

/// Per-pair NIST using information weights taken from `weight_refs`.
pub fn nist_pair_oracle(hyp: &str, reference: &str, weight_refs: &[String], max_n: usize) -> f64 {
    let ref_tokens: Vec<Vec<String>> = weight_refs.iter().map(|r| tokenize_words(r)).collect();
    let h = tokenize_words(hyp);
    let r = tokenize_words(reference);
    let mut sum = 0.0f64;
    for n in 1..=max_n {
        let hn = collect_ngram_list(&h, n);
        let rn = collect_ngram_list(&r, n);
        if hn.is_empty() {
            continue;
        }
        let mut contributions: Vec<(String, f64)> = Vec::new();
        let mut seen: Vec<&String> = Vec::new();
        for g in &hn {
            if seen.contains(&g) {
                continue;
            }
            seen.push(g);
            let hc = hn.iter().filter(|x| *x == g).count();
            let rc = rn.iter().filter(|x| *x == g).count();
            let matched = hc.min(rc);
            if matched > 0 {
                contributions.push((g.clone(), matched as f64 * nist_info(&ref_tokens, g, n)));
            }
        }
        contributions.sort_by(|a, b| a.0.cmp(&b.0));
        let num: f64 = contributions.iter().map(|(_, c)| c).sum();
        sum += num / hn.len() as f64;
    }
    if h.is_empty() || r.is_empty() {
        return 0.0;
    }
    let beta = 0.5f64.ln() / (1.5f64.ln() * 1.5f64.ln());
    let ratio = (h.len() as f64 / r.len() as f64).min(1.0);
    let bp = (beta * ratio.ln() * ratio.ln()).exp();
    sum * bp
}

fn nist_info(ref_tokens: &[Vec<String>], gram: &str, n: usize) -> f64 {
    let count = |g: &str, k: usize| -> usize {
        ref_tokens
            .iter()
            .map(|t| collect_ngram_list(t, k).iter().filter(|x| *x == g).count())
            .sum()
    };
    let c_full = count(gram, n);
    if c_full == 0 {
        return 0.0;
    }
    if n == 1 {
        let total: usize = ref_tokens.iter().map(|t| t.len()).sum();
        (total as f64 / c_full as f64).log2()
    } else {
        let prefix = gram
            .split(' ')
            .take(n - 1)
            .collect::<Vec<_>>()
            .join(" ");
        let c_prefix = count(&prefix, n - 1);
        (c_prefix as f64 / c_full as f64).log2()
    }
}

fn cos_clamped(a: &[f64], b: &[f64]) -> f64 {
    if a == b {
        return 1.0;
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

/// Greedy-matching BERTScore over pre-embedded token vectors. Per-token
/// similarities are cosines clamped to [0,1], with bitwise-equal vectors
/// scoring exactly 1.
pub fn bertscore_oracle(hyp: &[Vec<f64>], reference: &[Vec<f64>]) -> (f64, f64, f64) {
    if hyp.is_empty() || reference.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mut p = 0.0f64;
    for hv in hyp {
        let best = reference
            .iter()
            .map(|rv| cos_clamped(hv, rv))
            .fold(0.0f64, f64::max);
        p += best;
    }
    p /= hyp.len() as f64;
    let mut r = 0.0f64;
    for rv in reference {
        let best = hyp
            .iter()
            .map(|hv| cos_clamped(rv, hv))
            .fold(0.0f64, f64::max);
        r += best;
    }
    r /= reference.len() as f64;
    let f1 = if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) };
    (p, r, f1)
}

/// Exhaustive argmax of (cosine + sentence BLEU)/2 over candidate features,
/// ties broken by the lowest (claim_number, index). Returns the position of
/// the winner in the input slice together with its three score parts.
pub fn argmax_match_oracle(
    paragraph: &str,
    features: &[(u32, u32, String)],
) -> (usize, f64, f64, f64) {
    assert!(!features.is_empty());
    let mut best: Option<(usize, f64, f64, f64)> = None;
    for (pos, (claim, idx, text)) in features.iter().enumerate() {
        let c = cosine_oracle(paragraph, text);
        let b = sentence_bleu_oracle(paragraph, text);
        let combined = (c + b) / 2.0;
        let better = match &best {
            None => true,
            Some((bpos, _, _, bcomb)) => {
                let (bclaim, bidx, _) = &features[*bpos];
                combined > *bcomb
                    || (combined == *bcomb && (*claim, *idx) < (*bclaim, *bidx))
            }
        };
        if better {
            best = Some((pos, c, b, combined));
        }
    }
    best.unwrap()
}
