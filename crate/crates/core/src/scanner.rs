//! Source discovery and `#include` extraction.

use std::fs;
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::paths::normalize_lexically;

pub const DEFAULT_EXTENSIONS: [&str; 2] = [".h", ".cpp"];

/// One repository to analyse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepoSpec {
    pub name: String,
    pub root: PathBuf,
    pub extensions: Vec<String>,
    pub exclude_dirs: Vec<String>,
    /// Extra first-pass search directories. Relative entries are taken from
    /// the repository root. The root itself is always searched last.
    pub include_dirs: Vec<PathBuf>,
}

impl RepoSpec {
    pub fn new(name: impl Into<String>, root: impl Into<PathBuf>) -> Self {
        RepoSpec {
            name: name.into(),
            root: root.into(),
            extensions: DEFAULT_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
            exclude_dirs: Vec::new(),
            include_dirs: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.extensions.is_empty() {
            return Err(Error::Config(format!(
                "repository `{}` has no file extensions",
                self.name
            )));
        }
        if let Some(bad) = self.extensions.iter().find(|e| !e.starts_with('.') || e.len() < 2) {
            return Err(Error::BadExtension(bad.clone()));
        }
        Ok(())
    }

    /// Absolute, lexically normalised root.
    pub fn absolute_root(&self) -> Result<PathBuf> {
        let abs = std::path::absolute(&self.root).map_err(|e| Error::RepoRoot {
            path: self.root.clone(),
            reason: e.to_string(),
        })?;
        Ok(normalize_lexically(&abs))
    }

    /// First-pass search directories after the including file's own folder.
    pub fn search_dirs(&self) -> Result<Vec<PathBuf>> {
        let root = self.absolute_root()?;
        let mut dirs: Vec<PathBuf> = self
            .include_dirs
            .iter()
            .map(|d| normalize_lexically(&root.join(d)))
            .collect();
        if !dirs.contains(&root) {
            dirs.push(root);
        }
        Ok(dirs)
    }

    fn has_source_suffix(&self, name: &str) -> bool {
        self.extensions.iter().any(|ext| name.ends_with(ext.as_str()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Delimiter {
    Quoted,
    Angled,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RawInclude {
    pub including_file: PathBuf,
    pub directive_text: String,
    pub delimiter: Delimiter,
    /// 1-based.
    pub line: usize,
}

/// `#include MACRO_NAME`; no path is knowable without preprocessing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MacroInclude {
    pub including_file: PathBuf,
    pub token: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Directive {
    Include(RawInclude),
    Macro(MacroInclude),
}

impl Directive {
    pub fn line(&self) -> usize {
        match self {
            Directive::Include(r) => r.line,
            Directive::Macro(m) => m.line,
        }
    }
}

/// Every regular file under the root with a configured suffix, sorted by
/// path. Symbolic links are not followed.
pub fn scan_repo(spec: &RepoSpec) -> Result<Vec<PathBuf>> {
    spec.validate()?;
    let root = spec.absolute_root()?;
    let meta = fs::metadata(&root).map_err(|e| Error::RepoRoot {
        path: root.clone(),
        reason: e.to_string(),
    })?;
    if !meta.is_dir() {
        return Err(Error::RepoRoot {
            path: root,
            reason: "not a directory".to_string(),
        });
    }
    fs::read_dir(&root).map_err(|e| Error::RepoRoot {
        path: root.clone(),
        reason: e.to_string(),
    })?;

    let walker = WalkDir::new(&root)
        .follow_links(false)
        .into_iter()
        .filter_entry(|e| {
            e.depth() == 0
                || !e.file_type().is_dir()
                || !spec
                    .exclude_dirs
                    .iter()
                    .any(|x| e.file_name().to_string_lossy() == x.as_str())
        });

    let mut files = Vec::new();
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                log::warn!("{}: skipping unreadable entry: {e}", spec.name);
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        if spec.has_source_suffix(&entry.file_name().to_string_lossy()) {
            files.push(entry.into_path());
        }
    }
    files.sort();
    Ok(files)
}

/// Reads a source file as text, replacing undecodable bytes. An unreadable
/// file yields empty content and a diagnostic message.
pub fn read_source(path: &Path) -> (String, Option<String>) {
    match fs::read(path) {
        Ok(bytes) => (String::from_utf8_lossy(&bytes).into_owned(), None),
        Err(e) => (String::new(), Some(format!("{}: {e}", path.display()))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LexState {
    Code,
    LineComment,
    BlockComment,
    Literal(char),
}

/// Blanks out `//` and `/* */` comments, keeping every newline so line
/// numbers are preserved. String and character literals are skipped so that
/// comment markers inside them survive; literals end at an unescaped newline.
pub fn strip_comments(content: &str) -> String {
    let chars: Vec<char> = content.chars().collect();
    let mut out = String::with_capacity(content.len());
    let mut state = LexState::Code;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        match state {
            LexState::Code => match (c, next) {
                ('/', Some('/')) => {
                    state = LexState::LineComment;
                    out.push_str("  ");
                    i += 2;
                    continue;
                }
                ('/', Some('*')) => {
                    state = LexState::BlockComment;
                    out.push_str("  ");
                    i += 2;
                    continue;
                }
                ('"', _) | ('\'', _) => {
                    state = LexState::Literal(c);
                    out.push(c);
                }
                _ => out.push(c),
            },
            LexState::LineComment => match (c, next) {
                // backslash-newline continues the comment
                ('\\', Some('\n')) => {
                    out.push_str(" \n");
                    i += 2;
                    continue;
                }
                ('\n', _) => {
                    state = LexState::Code;
                    out.push('\n');
                }
                _ => out.push(' '),
            },
            LexState::BlockComment => match (c, next) {
                ('*', Some('/')) => {
                    state = LexState::Code;
                    out.push_str("  ");
                    i += 2;
                    continue;
                }
                ('\n', _) => out.push('\n'),
                _ => out.push(' '),
            },
            LexState::Literal(quote) => match (c, next) {
                ('\\', Some(n)) => {
                    out.push(c);
                    out.push(n);
                    i += 2;
                    continue;
                }
                ('\n', _) => {
                    state = LexState::Code;
                    out.push('\n');
                }
                _ => {
                    if c == quote {
                        state = LexState::Code;
                    }
                    out.push(c);
                }
            },
        }
        i += 1;
    }
    out
}

enum Parsed<'a> {
    Path(&'a str, Delimiter),
    Macro(&'a str),
}

fn parse_directive_line(line: &str) -> Option<Parsed<'_>> {
    let rest = line.trim_start().strip_prefix('#')?;
    let rest = rest.trim_start_matches([' ', '\t']);
    let rest = rest.strip_prefix("include")?;
    // reject `#include_next`, `#includefoo`
    if rest
        .chars()
        .next()
        .is_some_and(|c| c.is_alphanumeric() || c == '_')
    {
        return None;
    }
    let rest = rest.trim_start_matches([' ', '\t']);
    let mut chars = rest.chars();
    match chars.next()? {
        '"' => {
            let body = &rest[1..];
            let end = body.find('"')?;
            Some(Parsed::Path(&body[..end], Delimiter::Quoted))
        }
        '<' => {
            let body = &rest[1..];
            let end = body.find('>')?;
            Some(Parsed::Path(&body[..end], Delimiter::Angled))
        }
        _ => {
            let token = rest.split_whitespace().next()?;
            Some(Parsed::Macro(token))
        }
    }
}

/// All include directives of one file in source order, including
/// macro-valued ones.
pub fn extract_directives(file_path: &Path, content: &str) -> Vec<Directive> {
    let stripped = strip_comments(content);
    let mut out = Vec::new();
    for (idx, line) in stripped.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        match parse_directive_line(line) {
            Some(Parsed::Path(text, delimiter)) => {
                if text.is_empty() {
                    continue;
                }
                out.push(Directive::Include(RawInclude {
                    including_file: file_path.to_path_buf(),
                    directive_text: text.to_string(),
                    delimiter,
                    line: idx + 1,
                }));
            }
            Some(Parsed::Macro(token)) => out.push(Directive::Macro(MacroInclude {
                including_file: file_path.to_path_buf(),
                token: token.to_string(),
                line: idx + 1,
            })),
            None => {}
        }
    }
    out
}

pub fn extract_includes(file_path: &Path, content: &str) -> Vec<RawInclude> {
    extract_directives(file_path, content)
        .into_iter()
        .filter_map(|d| match d {
            Directive::Include(r) => Some(r),
            Directive::Macro(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(includes: &[RawInclude]) -> Vec<(&str, Delimiter, usize)> {
        includes
            .iter()
            .map(|r| (r.directive_text.as_str(), r.delimiter, r.line))
            .collect()
    }

    #[test]
    fn single_quoted_include() {
        let got = extract_includes(Path::new("/r/a.cpp"), "#include \"core/os.h\"\n");
        assert_eq!(texts(&got), [("core/os.h", Delimiter::Quoted, 1)]);
        assert_eq!(got[0].including_file, Path::new("/r/a.cpp"));
    }

    #[test]
    fn commented_includes_are_ignored() {
        let src = "// #include \"a.h\"\n/* #include <b.h> */\n";
        assert!(extract_includes(Path::new("/r/a.cpp"), src).is_empty());
    }

    #[test]
    fn angled_then_spaced_quoted() {
        let src = "#include <stdio.h>\n#  include \"x.h\"\n";
        let got = extract_includes(Path::new("/r/a.cpp"), src);
        assert_eq!(
            texts(&got),
            [("stdio.h", Delimiter::Angled, 1), ("x.h", Delimiter::Quoted, 2)]
        );
    }

    #[test]
    fn multiline_block_comment_hides_directive() {
        let src = "/* start\n#include \"hidden.h\"\nend */ #include \"shown.h\"\n\t#include\t<tab.h>\n";
        let got = extract_includes(Path::new("/r/a.cpp"), src);
        assert_eq!(
            texts(&got),
            [("shown.h", Delimiter::Quoted, 3), ("tab.h", Delimiter::Angled, 4)]
        );
    }

    #[test]
    fn comment_markers_inside_quotes_survive() {
        let src = "#include \"weird//name.h\"\nconst char* s = \"/*\";\n#include \"after.h\"\n";
        let got = extract_includes(Path::new("/r/a.cpp"), src);
        assert_eq!(
            texts(&got),
            [("weird//name.h", Delimiter::Quoted, 1), ("after.h", Delimiter::Quoted, 3)]
        );
    }

    #[test]
    fn line_comment_continuation() {
        let src = "// note \\\n#include \"continued.h\"\n#include \"real.h\"\n";
        let got = extract_includes(Path::new("/r/a.cpp"), src);
        assert_eq!(texts(&got), [("real.h", Delimiter::Quoted, 3)]);
    }

    #[test]
    fn conditionals_are_not_evaluated() {
        let src = "#ifdef _WIN32\n#include <windows.h>\n#else\n#include <unistd.h>\n#endif\n";
        let got = extract_includes(Path::new("/r/a.cpp"), src);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn macro_includes_and_lookalikes() {
        let src = "#include PLATFORM_HEADER\n#include_next <x.h>\n#define include\n#include \"\"\n#import <y.h>\r\n#include \"crlf.h\"\r\n";
        let got = extract_directives(Path::new("/r/a.cpp"), src);
        assert_eq!(got.len(), 2);
        match &got[0] {
            Directive::Macro(m) => {
                assert_eq!(m.token, "PLATFORM_HEADER");
                assert_eq!(m.line, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        match &got[1] {
            Directive::Include(r) => assert_eq!((r.directive_text.as_str(), r.line), ("crlf.h", 6)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undecodable_bytes_do_not_abort() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("latin1.cpp");
        fs::write(&p, b"// caf\xe9\n#include \"ok.h\"\n").unwrap();
        let (content, diag) = read_source(&p);
        assert!(diag.is_none());
        assert_eq!(extract_includes(&p, &content).len(), 1);

        let (content, diag) = read_source(&dir.path().join("missing.cpp"));
        assert!(content.is_empty());
        assert!(diag.is_some());
    }

    #[test]
    fn scan_empty_directory() {
        let dir = tempfile::tempdir().unwrap();
        let spec = RepoSpec::new("e", dir.path());
        assert!(scan_repo(&spec).unwrap().is_empty());
    }

    #[test]
    fn scan_filters_suffixes_and_excluded_dirs() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        fs::create_dir_all(root.join("build")).unwrap();
        fs::create_dir_all(root.join("src/build_tools")).unwrap();
        for f in ["a.cpp", "a.h", "notes.txt", "build/gen.h", "src/build_tools/t.cpp", "a.hpp"] {
            fs::write(root.join(f), "").unwrap();
        }
        let mut spec = RepoSpec::new("t", root);
        let rel = |files: Vec<PathBuf>| -> Vec<String> {
            files
                .iter()
                .map(|p| p.strip_prefix(root).unwrap().to_string_lossy().into_owned())
                .collect()
        };
        assert_eq!(
            rel(scan_repo(&spec).unwrap()),
            ["a.cpp", "a.h", "build/gen.h", "src/build_tools/t.cpp"]
        );
        spec.exclude_dirs = vec!["build".into()];
        assert_eq!(
            rel(scan_repo(&spec).unwrap()),
            ["a.cpp", "a.h", "src/build_tools/t.cpp"]
        );
    }

    #[cfg(unix)]
    #[test]
    fn scan_does_not_follow_symlinks() {
        let dir = tempfile::tempdir().unwrap();
        let other = tempfile::tempdir().unwrap();
        fs::write(other.path().join("outside.h"), "").unwrap();
        fs::write(dir.path().join("real.h"), "").unwrap();
        std::os::unix::fs::symlink(other.path(), dir.path().join("linked")).unwrap();
        std::os::unix::fs::symlink(dir.path().join("real.h"), dir.path().join("alias.h")).unwrap();
        let files = scan_repo(&RepoSpec::new("s", dir.path())).unwrap();
        assert_eq!(files.len(), 1);
        assert!(files[0].ends_with("real.h"));
    }

    #[test]
    fn scan_missing_root_is_fatal() {
        let err = scan_repo(&RepoSpec::new("m", "/definitely/not/here")).unwrap_err();
        assert!(matches!(err, Error::RepoRoot { .. }));
        assert!(err.to_string().contains("/definitely/not/here"));
    }

    #[test]
    fn invalid_extensions_rejected() {
        let mut spec = RepoSpec::new("x", "/tmp");
        spec.extensions = vec!["h".into()];
        assert!(matches!(spec.validate(), Err(Error::BadExtension(_))));
        spec.extensions.clear();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn scan_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        for f in ["z.h", "m/b.cpp", "m/a.cpp", "a/z.h"] {
            let p = dir.path().join(f);
            fs::create_dir_all(p.parent().unwrap()).unwrap();
            fs::write(p, "").unwrap();
        }
        let spec = RepoSpec::new("d", dir.path());
        let first = scan_repo(&spec).unwrap();
        assert_eq!(first, scan_repo(&spec).unwrap());
        let mut sorted = first.clone();
        sorted.sort();
        assert_eq!(first, sorted);
    }

    fn line_strategy() -> impl Strategy<Value = String> {
        prop_oneof![
            "[a-z_]{1,8}(/[a-z_]{1,8}){0,2}\\.h".prop_map(|p| format!("#include \"{p}\"")),
            "[a-z_]{1,8}\\.h".prop_map(|p| format!("#  include <{p}>")),
            "[a-z ]{0,10}".prop_map(|t| format!("// {t} #include \"c.h\"")),
            "[a-z ]{0,10}".prop_map(|t| format!("/* {t}\n#include \"in_block.h\" */")),
            "[a-z ]{0,10}".prop_map(|t| format!("int x; // {t}")),
            Just("const char* s = \"/*\";".to_string()),
            Just("#include MACRO_HEADER".to_string()),
        ]
    }

    proptest! {
        #[test]
        fn every_line_points_at_a_directive(lines in prop::collection::vec(line_strategy(), 0..20)) {
            let content = lines.join("\n");
            let stripped = strip_comments(&content);
            let stripped_lines: Vec<&str> = stripped.split('\n').collect();
            for d in extract_directives(Path::new("/r/f.cpp"), &content) {
                let text = stripped_lines[d.line() - 1].trim_start();
                let after_hash = text.strip_prefix('#').unwrap().trim_start();
                prop_assert!(after_hash.starts_with("include"));
            }
        }

        #[test]
        fn extraction_is_streaming_consistent(
            a in prop::collection::vec(line_strategy(), 0..12),
            b in prop::collection::vec(line_strategy(), 0..12),
        ) {
            let c1: String = a.iter().map(|l| format!("{l}\n")).collect();
            let c2: String = b.iter().map(|l| format!("{l}\n")).collect();
            let path = Path::new("/r/f.cpp");
            let whole = extract_directives(path, &format!("{c1}{c2}"));
            let offset = c1.matches('\n').count();
            let mut pieces = extract_directives(path, &c1);
            for d in extract_directives(path, &c2) {
                pieces.push(match d {
                    Directive::Include(mut r) => { r.line += offset; Directive::Include(r) }
                    Directive::Macro(mut m) => { m.line += offset; Directive::Macro(m) }
                });
            }
            prop_assert_eq!(whole, pieces);
        }
    }
}
