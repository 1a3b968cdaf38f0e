//! Text formats for every artifact the commands read or write, plus word
//! list ingestion and duration parsing. All emitters produce canonical
//! text (single spaces, trailing newline) so that parse → emit round-trips
//! bit-exactly.

use std::path::Path;
use std::time::Duration;

use soda_core::double_array::DoubleArray;
use soda_core::reductions::{RdhpInstance, ScsInstance, ScsSymbol, SmcInstance};
use soda_core::soda::{SodaInstance, WildcardString};
use soda_core::{Error, Result};

/// Reads a user-supplied file; failures are input errors carrying the path.
pub fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

/// Loads a word list: one word per line, blank lines skipped. The list
/// must be nonempty; order and duplicates are preserved.
pub fn read_words(path: &Path) -> Result<Vec<String>> {
    let words: Vec<String> = read_input(path)?
        .lines()
        .map(|l| l.trim_end_matches('\r').to_string())
        .filter(|l| !l.is_empty())
        .collect();
    if words.is_empty() {
        return Err(Error::Input(format!(
            "word list {} is empty",
            path.display()
        )));
    }
    Ok(words)
}

/// Maps the distinct characters of a data set onto `1..=sigma` in
/// ascending code-point order.
#[derive(Debug, Clone)]
pub struct AlphabetMapping {
    chars: Vec<char>,
}

impl AlphabetMapping {
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        let mut chars: Vec<char> = words
            .iter()
            .flat_map(|w| w.as_ref().chars())
            .collect();
        chars.sort_unstable();
        chars.dedup();
        AlphabetMapping { chars }
    }

    pub fn sigma(&self) -> usize {
        self.chars.len()
    }

    /// Translates a word into symbols; characters outside the mapping are
    /// input errors.
    pub fn encode(&self, word: &str) -> Result<Vec<usize>> {
        word.chars()
            .map(|c| {
                self.chars
                    .binary_search(&c)
                    .map(|i| i + 1)
                    .map_err(|_| Error::Input(format!("character {c:?} is not in the alphabet")))
            })
            .collect()
    }

    pub fn encode_all<S: AsRef<str>>(&self, words: &[S]) -> Result<Vec<Vec<usize>>> {
        words.iter().map(|w| self.encode(w.as_ref())).collect()
    }
}

/// Parses a duration: a bare number means seconds; `ms`, `s`, `m`, `h`
/// suffixes select the unit. `0` is a valid (instantly expiring) budget.
pub fn parse_duration(text: &str) -> Result<Duration> {
    let text = text.trim();
    let (digits, scale_ms) = if let Some(d) = text.strip_suffix("ms") {
        (d, 1u64)
    } else if let Some(d) = text.strip_suffix('s') {
        (d, 1000)
    } else if let Some(d) = text.strip_suffix('m') {
        (d, 60_000)
    } else if let Some(d) = text.strip_suffix('h') {
        (d, 3_600_000)
    } else {
        (text, 1000)
    };
    let value: u64 = digits
        .parse()
        .map_err(|_| Error::Input(format!("bad duration {text:?}")))?;
    Ok(Duration::from_millis(value * scale_ms))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A whitespace-token cursor over one line.
fn line_ints(line: &str, what: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Input(format!("bad {what} token {tok:?}")))
        })
        .collect()
}

/// Serializes a double array: header `da <N> <M>`, then base and check
/// (N slot entries each, 0 = vacant), the node → slot table (M entries),
/// and the per-slot terminal flags (N entries, 0/1).
pub fn write_da(da: &DoubleArray) -> String {
    let n = da.size();
    let mut out = format!("da {} {}\n", n, da.node_count());
    out.push_str(&join((1..=n).map(|s| da.base_at(s))));
    out.push('\n');
    out.push_str(&join((1..=n).map(|s| da.check_at(s))));
    out.push('\n');
    out.push_str(&join(da.node_of_table()[1..].iter()));
    out.push('\n');
    out.push_str(&join((1..=n).map(|s| usize::from(da.terminal_at(s)))));
    out.push('\n');
    out
}

/// Parses the [`write_da`] format. The symbol bound is recovered as the
/// array length, which never rejects a transition the builder allowed.
pub fn parse_da(text: &str) -> Result<DoubleArray> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Input("empty double-array file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match fields.as_slice() {
        ["da", n, m] => (
            n.parse::<usize>()
                .map_err(|_| Error::Input(format!("bad array length {n:?}")))?,
            m.parse::<usize>()
                .map_err(|_| Error::Input(format!("bad node count {m:?}")))?,
        ),
        _ => return Err(Error::Input(format!("bad double-array header {header:?}"))),
    };
    let mut row = |what: &str, len: usize| -> Result<Vec<usize>> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Input(format!("missing {what} line")))?;
        let values = line_ints(line, what)?;
        if values.len() != len {
            return Err(Error::Input(format!(
                "expected {len} {what} entries, got {}",
                values.len()
            )));
        }
        Ok(values)
    };
    let base = row("base", n)?;
    let check = row("check", n)?;
    let node_of = row("node slot", m)?;
    let terminal = row("terminal flag", n)?
        .into_iter()
        .map(|v| match v {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(Error::Input(format!("terminal flag {other} is not 0/1"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Input("trailing content after the terminal line".into()));
    }
    DoubleArray::from_raw(n, base, check, terminal, node_of)
}

/// Serializes an alignment instance: header `soda <n> <sigma>`, then one
/// line per string with `*` for wildcards and the letter otherwise.
pub fn write_soda(sigma: usize, strings: &[WildcardString]) -> String {
    let mut out = format!("soda {} {sigma}\n", strings.len());
    for s in strings {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

/// Parses the [`write_soda`] format into the alphabet bound and the raw
/// wildcard strings. Letters are sanity-checked against the larger of
/// the two header fields: index-locked instances renumber strings
/// densely (letters run up to the string count), while expanded
/// instances stay within the declared alphabet.
pub fn parse_soda(text: &str) -> Result<(usize, Vec<WildcardString>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Input("empty alignment file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, sigma) = match fields.as_slice() {
        ["soda", n, sigma] => (
            n.parse::<usize>()
                .map_err(|_| Error::Input(format!("bad string count {n:?}")))?,
            sigma
                .parse::<usize>()
                .map_err(|_| Error::Input(format!("bad alphabet size {sigma:?}")))?,
        ),
        _ => return Err(Error::Input(format!("bad alignment header {header:?}"))),
    };
    let bound = n.max(sigma);
    let mut strings = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Input(format!("expected {n} strings")))?;
        let s: WildcardString = line.parse()?;
        if let Some(&letter) = s.symbols().iter().flatten().find(|&&l| l > bound) {
            return Err(Error::Input(format!(
                "letter {letter} exceeds the alphabet bound {bound}"
            )));
        }
        strings.push(s);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Input("trailing content after the strings".into()));
    }
    Ok((sigma, strings))
}

/// Tightens parsed strings into an index-locked instance: string `i` must
/// have length `sigma` and carry only letter `i + 1`.
pub fn to_soda_instance(sigma: usize, strings: &[WildcardString]) -> Result<SodaInstance> {
    let positions = strings
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.len() != sigma {
                return Err(Error::Input(format!(
                    "string {} has length {}, want {sigma}",
                    i + 1,
                    s.len()
                )));
            }
            let mut at = Vec::new();
            for (p, &cell) in s.symbols().iter().enumerate() {
                match cell {
                    None => {}
                    Some(letter) if letter == i + 1 => at.push(p + 1),
                    Some(letter) => {
                        return Err(Error::Input(format!(
                            "string {} carries foreign letter {letter}",
                            i + 1
                        )))
                    }
                }
            }
            Ok(at)
        })
        .collect::<Result<Vec<_>>>()?;
    SodaInstance::new(sigma, positions)
}

/// Serializes a graph instance: header `rdhp <n> <m> <s> <t>`, then one
/// `u v` line per edge in sorted order.
pub fn write_rdhp(g: &RdhpInstance) -> String {
    let mut out = format!("rdhp {} {} {} {}\n", g.n(), g.m(), g.s(), g.t());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parses the [`write_rdhp`] format; `relax` permits out-degree-1
/// vertices.
pub fn parse_rdhp(text: &str, relax: bool) -> Result<RdhpInstance> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Input("empty graph file".into()))?;
    let head = line_ints(header.strip_prefix("rdhp").unwrap_or(""), "header")?;
    let [n, m, s, t] = head.as_slice() else {
        return Err(Error::Input(format!("bad graph header {header:?}")));
    };
    let mut edges = Vec::with_capacity(*m);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let pair = line_ints(line, "edge")?;
        let [u, v] = pair.as_slice() else {
            return Err(Error::Input(format!("bad edge line {line:?}")));
        };
        edges.push((*u, *v));
    }
    if edges.len() != *m {
        return Err(Error::Input(format!(
            "header promises {m} edges, found {}",
            edges.len()
        )));
    }
    RdhpInstance::new(*n, *s, *t, edges, relax)
}

fn role_name(symbol: ScsSymbol) -> String {
    match symbol {
        ScsSymbol::Open => "open".into(),
        ScsSymbol::Sep => "sep".into(),
        ScsSymbol::Close => "close".into(),
        ScsSymbol::Vertex(u) => format!("vertex {u}"),
        ScsSymbol::Mark(u) => format!("mark {u}"),
    }
}

fn parse_role(text: &str) -> Result<ScsSymbol> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let parse_u = |tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| Error::Input(format!("bad vertex number {tok:?}")))
    };
    match fields.as_slice() {
        ["open"] => Ok(ScsSymbol::Open),
        ["sep"] => Ok(ScsSymbol::Sep),
        ["close"] => Ok(ScsSymbol::Close),
        ["vertex", u] => Ok(ScsSymbol::Vertex(parse_u(u)?)),
        ["mark", u] => Ok(ScsSymbol::Mark(parse_u(u)?)),
        _ => Err(Error::Input(format!("bad symbol role {text:?}"))),
    }
}

/// Serializes a superstring instance: an alphabet table (`id : role` per
/// line), then one line of symbol ids per string.
pub fn write_scs(scs: &ScsInstance) -> String {
    let mut out = String::new();
    for (id, &symbol) in scs.symbols().iter().enumerate() {
        out.push_str(&format!("{} : {}\n", id + 1, role_name(symbol)));
    }
    for string in scs.strings() {
        out.push_str(&join(string.iter()));
        out.push('\n');
    }
    out
}

/// Parses the [`write_scs`] format; the table must define ids `1..=sigma`
/// exactly once each, in ascending order.
pub fn parse_scs(text: &str) -> Result<ScsInstance> {
    let mut symbols = Vec::new();
    let mut strings = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        if let Some((id, role)) = line.split_once(':') {
            let id: usize = id
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("bad symbol id {:?}", id.trim())))?;
            if id != symbols.len() + 1 {
                return Err(Error::Input(format!(
                    "symbol ids must ascend from 1; found {id} after {}",
                    symbols.len()
                )));
            }
            symbols.push(parse_role(role.trim())?);
        } else {
            strings.push(line_ints(line, "symbol id")?);
        }
    }
    ScsInstance::new(symbols, strings)
}

/// Serializes a matrix instance: header `smc <rows> <cols> <k>`, then one
/// 0/1 line per row.
pub fn write_smc(inst: &SmcInstance) -> String {
    let mut out = format!("smc {} {} {}\n", inst.rows(), inst.cols(), inst.k());
    for row in inst.matrix() {
        out.push_str(&join(row.iter().map(|&c| usize::from(c))));
        out.push('\n');
    }
    out
}

/// Parses the [`write_smc`] format.
pub fn parse_smc(text: &str) -> Result<SmcInstance> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Input("empty matrix file".into()))?;
    let head = line_ints(header.strip_prefix("smc").unwrap_or(""), "header")?;
    let [rows, cols, k] = head.as_slice() else {
        return Err(Error::Input(format!("bad matrix header {header:?}")));
    };
    let mut matrix = Vec::with_capacity(*rows);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let cells = line_ints(line, "matrix cell")?;
        if cells.len() != *cols {
            return Err(Error::Input(format!(
                "row {} has {} cells, want {cols}",
                matrix.len() + 1,
                cells.len()
            )));
        }
        let row = cells
            .into_iter()
            .map(|v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Input(format!("matrix cell {other} is not 0/1"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        matrix.push(row);
    }
    if matrix.len() != *rows {
        return Err(Error::Input(format!(
            "header promises {rows} rows, found {}",
            matrix.len()
        )));
    }
    let inst = SmcInstance::new(*k, matrix)?;
    debug_assert_eq!(inst.cols(), *cols);
    Ok(inst)
}

/// Writes a sidecar metadata file next to a generated artifact.
pub fn write_meta(path: &Path, entries: &[(&str, String)]) -> Result<()> {
    let meta: String = entries
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect();
    let meta_path = sidecar_path(path);
    std::fs::write(&meta_path, meta)?;
    Ok(())
}

/// The metadata path for an artifact: `<name>.meta` appended.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(".meta");
    std::path::PathBuf::from(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use soda_core::double_array::{greedy_build, BuildOrder};
    use soda_core::reductions::{coloring_to_smc, rdhp_to_scs, sample_rdhp};
    use soda_core::trie::Trie;

    #[test]
    fn alphabet_maps_ascending() {
        let mapping = AlphabetMapping::from_words(&["cab", "bad"]);
        assert_eq!(mapping.sigma(), 4);
        assert_eq!(mapping.encode("abcd").unwrap(), vec![1, 2, 3, 4]);
        assert!(mapping.encode("xyz").is_err());
    }

    #[test]
    fn durations_parse_with_units() {
        assert_eq!(parse_duration("250ms").unwrap(), Duration::from_millis(250));
        assert_eq!(parse_duration("30s").unwrap(), Duration::from_secs(30));
        assert_eq!(parse_duration("2m").unwrap(), Duration::from_secs(120));
        assert_eq!(parse_duration("1h").unwrap(), Duration::from_secs(3600));
        assert_eq!(parse_duration("5").unwrap(), Duration::from_secs(5));
        assert_eq!(parse_duration("0").unwrap(), Duration::ZERO);
        assert!(parse_duration("fast").is_err());
    }

    #[test]
    fn double_array_round_trips() {
        let trie = Trie::from_strings(2, &[vec![1, 2], vec![2], vec![2, 1]]).unwrap();
        let da = greedy_build(&trie, BuildOrder::Bfs);
        let text = write_da(&da);
        let back = parse_da(&text).unwrap();
        assert_eq!(write_da(&back), text);
        assert_eq!(back.size(), da.size());
        assert!(back.contains(&[1, 2]).unwrap());
        assert!(!back.contains(&[1]).unwrap());
    }

    #[test]
    fn double_array_rejects_corruption() {
        let trie = Trie::from_strings(2, &[vec![1, 2]]).unwrap();
        let text = write_da(&greedy_build(&trie, BuildOrder::Dfs));
        assert!(parse_da(&text.replace("da", "ad")).is_err());
        let truncated: String = text.lines().take(3).collect::<Vec<_>>().join("\n");
        assert!(parse_da(&truncated).is_err());
        assert!(parse_da(&format!("{text}9 9\n")).is_err());
    }

    #[test]
    fn soda_round_trips_and_tightens() {
        let strings = vec![
            "1 * 1".parse::<WildcardString>().unwrap(),
            "* 2 *".parse().unwrap(),
        ];
        let text = write_soda(3, &strings);
        let (sigma, back) = parse_soda(&text).unwrap();
        assert_eq!(sigma, 3);
        assert_eq!(write_soda(sigma, &back), text);
        let inst = to_soda_instance(sigma, &back).unwrap();
        assert_eq!(inst.positions(0), &[1, 3]);
        assert_eq!(inst.positions(1), &[2]);

        let foreign = vec!["2 * *".parse::<WildcardString>().unwrap()];
        assert!(to_soda_instance(3, &foreign).is_err());
        assert!(parse_soda("soda 1 2\n5\n").is_err());
    }

    #[test]
    fn rdhp_round_trips() {
        let (g, _) = sample_rdhp(6, 3).unwrap();
        let text = write_rdhp(&g);
        let back = parse_rdhp(&text, false).unwrap();
        assert_eq!(write_rdhp(&back), text);
        assert!(parse_rdhp("rdhp 2 1 1 2\n", false).is_err());
    }

    #[test]
    fn scs_round_trips() {
        let (g, _) = sample_rdhp(5, 9).unwrap();
        let scs = rdhp_to_scs(&g);
        let text = write_scs(&scs);
        let back = parse_scs(&text).unwrap();
        assert_eq!(write_scs(&back), text);
        assert_eq!(back.target_length(), scs.target_length());
        assert!(parse_scs("1 : open\n2 : griffin\n").is_err());
    }

    #[test]
    fn smc_round_trips() {
        let inst = coloring_to_smc(4, &[(1, 2), (3, 4)]).unwrap();
        let text = write_smc(&inst);
        let back = parse_smc(&text).unwrap();
        assert_eq!(write_smc(&back), text);
        assert!(parse_smc("smc 1 2 1\n0 2\n").is_err());
        assert!(parse_smc("smc 2 2 1\n0 1\n").is_err());
    }
}
