use std::path::{Component, Path, PathBuf};

/// Resolves `.` and `..` segments without touching the filesystem.
/// `..` at the root stays at the root.
pub fn normalize_lexically(path: &Path) -> PathBuf {
    let mut out = PathBuf::new();
    for component in path.components() {
        match component {
            Component::Prefix(p) => out.push(p.as_os_str()),
            Component::RootDir => out.push(Component::RootDir.as_os_str()),
            Component::CurDir => {}
            Component::ParentDir => match out.components().next_back() {
                Some(Component::Normal(_)) => {
                    out.pop();
                }
                Some(Component::RootDir) | Some(Component::Prefix(_)) => {}
                _ => out.push(".."),
            },
            Component::Normal(p) => out.push(p),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_dots() {
        assert_eq!(normalize_lexically(Path::new("/r/src/../a.h")), Path::new("/r/a.h"));
        assert_eq!(normalize_lexically(Path::new("/r/./src//b.h")), Path::new("/r/src/b.h"));
        assert_eq!(normalize_lexically(Path::new("/../x")), Path::new("/x"));
        assert_eq!(normalize_lexically(Path::new("a/../../b")), Path::new("../b"));
        assert_eq!(normalize_lexically(Path::new("../../b")), Path::new("../../b"));
    }
}
