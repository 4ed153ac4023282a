//! Mulan-format multi-label datasets: an ARFF data file whose label
//! attributes are named by a separate XML header.
//!
//! Features are stored as a `d×n` matrix (one row per attribute, one column
//! per instance) and labels as a binary `k×n` matrix.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::DenseMatrix;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("label `{0}` is not an attribute of the data file")]
    UnknownLabelName(String),
    #[error("missing value `?` at line {line}, column {column}")]
    MissingValue { line: usize, column: usize },
    #[error("label `{label}` has non-binary value {value} at line {line}")]
    NonBinaryLabel { line: usize, label: String, value: f64 },
    #[error("malformed label header: {0}")]
    MalformedXml(String),
    #[error("label header declares no labels")]
    EmptyLabelSet,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("train/test schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("proportion {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

/// Features, binary labels, and their names.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLabelDataset {
    features: DenseMatrix,
    labels: DenseMatrix,
    feature_names: Vec<String>,
    label_names: Vec<String>,
}

impl MultiLabelDataset {
    pub fn new(
        features: DenseMatrix,
        labels: DenseMatrix,
        feature_names: Vec<String>,
        label_names: Vec<String>,
    ) -> Result<Self, DatasetError> {
        if features.nrows() != feature_names.len() {
            return Err(DatasetError::Invalid(format!(
                "{} feature rows but {} feature names",
                features.nrows(),
                feature_names.len()
            )));
        }
        if labels.nrows() != label_names.len() {
            return Err(DatasetError::Invalid(format!(
                "{} label rows but {} label names",
                labels.nrows(),
                label_names.len()
            )));
        }
        if features.ncols() != labels.ncols() {
            return Err(DatasetError::Invalid(format!(
                "{} feature columns but {} label columns",
                features.ncols(),
                labels.ncols()
            )));
        }
        if let Some(v) = labels.as_slice().iter().find(|&&v| v != 0.0 && v != 1.0) {
            return Err(DatasetError::Invalid(format!("label entry {v} is not 0 or 1")));
        }
        for (kind, names) in [("feature", &feature_names), ("label", &label_names)] {
            let mut seen = HashSet::new();
            if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
                return Err(DatasetError::Invalid(format!("duplicate {kind} name `{dup}`")));
            }
        }
        Ok(Self {
            features,
            labels,
            feature_names,
            label_names,
        })
    }

    /// `d×n`
    pub fn features(&self) -> &DenseMatrix {
        &self.features
    }

    /// `k×n`, entries in {0, 1}.
    pub fn labels(&self) -> &DenseMatrix {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn num_features(&self) -> usize {
        self.features.nrows()
    }

    pub fn num_labels(&self) -> usize {
        self.labels.nrows()
    }

    pub fn num_instances(&self) -> usize {
        self.features.ncols()
    }

    /// Same features and names with a replacement label matrix.
    pub fn with_labels(&self, labels: DenseMatrix) -> Result<Self, DatasetError> {
        Self::new(
            self.features.clone(),
            labels,
            self.feature_names.clone(),
            self.label_names.clone(),
        )
    }

    /// Dense ARFF with features first (numeric) and labels last (`{0,1}`).
    pub fn to_arff(&self, relation: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "@relation {}", quote_name(relation));
        out.push('\n');
        for name in &self.feature_names {
            let _ = writeln!(out, "@attribute {} numeric", quote_name(name));
        }
        for name in &self.label_names {
            let _ = writeln!(out, "@attribute {} {{0,1}}", quote_name(name));
        }
        out.push_str("\n@data\n");
        for i in 0..self.num_instances() {
            let feats = (0..self.num_features()).map(|m| self.features[(m, i)].to_string());
            let labs = (0..self.num_labels()).map(|j| format!("{}", self.labels[(j, i)] as u8));
            let row: Vec<String> = feats.chain(labs).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn quote_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    out.push('\'');
    for c in name.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

/// A train/test split sharing one schema.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetPair {
    pub name: String,
    pub train: MultiLabelDataset,
    pub test: MultiLabelDataset,
}

impl DatasetPair {
    pub fn new(
        name: impl Into<String>,
        train: MultiLabelDataset,
        test: MultiLabelDataset,
    ) -> Result<Self, DatasetError> {
        if train.feature_names != test.feature_names {
            return Err(DatasetError::SchemaMismatch(format!(
                "train has {} features, test has {} (or names differ)",
                train.num_features(),
                test.num_features()
            )));
        }
        if train.label_names != test.label_names {
            return Err(DatasetError::SchemaMismatch("label names differ".into()));
        }
        Ok(Self {
            name: name.into(),
            train,
            test,
        })
    }
}

struct Attribute {
    name: String,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> DatasetError {
    DatasetError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Reads a possibly quoted ARFF token starting at `start`. Returns the
/// unquoted token and the byte offset just past it.
fn read_token(line: &str, start: usize, line_no: usize) -> Result<(String, usize), DatasetError> {
    let bytes = line.as_bytes();
    let mut pos = start;
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    if pos >= bytes.len() {
        return Err(syntax(line_no, pos + 1, "expected a name"));
    }
    let quote = bytes[pos];
    if quote == b'\'' || quote == b'"' {
        let mut out = String::new();
        let mut chars = line[pos + 1..].char_indices();
        while let Some((off, c)) = chars.next() {
            match c {
                '\\' => {
                    if let Some((_, escaped)) = chars.next() {
                        out.push(escaped);
                    }
                }
                c if c as u32 == quote as u32 => return Ok((out, pos + 1 + off + 1)),
                c => out.push(c),
            }
        }
        Err(syntax(line_no, pos + 1, "unterminated quoted name"))
    } else {
        let end = line[pos..]
            .find(|c: char| c.is_whitespace() || c == '{')
            .map_or(line.len(), |e| pos + e);
        Ok((line[pos..end].to_string(), end))
    }
}

fn parse_attribute(line: &str, line_no: usize) -> Result<Attribute, DatasetError> {
    let (name, after) = read_token(line, "@attribute".len(), line_no)?;
    let rest = line[after..].trim();
    let type_col = line.len() - line[after..].trim_start().len() + 1;
    // nominal values must still parse as numbers; that is checked per row
    if rest.starts_with('{') {
        if !rest.ends_with('}') {
            return Err(syntax(line_no, type_col, "unterminated nominal value list"));
        }
    } else {
        match rest.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => {}
            other => {
                return Err(syntax(
                    line_no,
                    type_col,
                    format!("unsupported attribute type `{other}`"),
                ))
            }
        }
    }
    Ok(Attribute { name })
}

/// Splits on commas, yielding trimmed fields with their 1-based column.
fn split_fields(text: &str, base_col: usize) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    text.split(',').map(move |field| {
        let lead = field.len() - field.trim_start().len();
        let col = base_col + offset + lead;
        offset += field.len() + 1;
        (col, field.trim())
    })
}

fn parse_value(token: &str, line_no: usize, column: usize) -> Result<f64, DatasetError> {
    let unquoted = token
        .strip_prefix('\'')
        .and_then(|t| t.strip_suffix('\''))
        .or_else(|| token.strip_prefix('"').and_then(|t| t.strip_suffix('"')))
        .unwrap_or(token);
    if unquoted == "?" {
        return Err(DatasetError::MissingValue { line: line_no, column });
    }
    match unquoted.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(syntax(line_no, column, format!("`{unquoted}` is not a finite number"))),
    }
}

/// Parses an ARFF document. Attributes named in `label_names` become label
/// rows in that order; all other attributes become feature rows in file
/// order.
pub fn parse_arff(text: &str, label_names: &[String]) -> Result<MultiLabelDataset, DatasetError> {
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut saw_data = false;

    for (line_no, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            continue;
        } else if lower.starts_with("@attribute") {
            attributes.push(parse_attribute(line, line_no)?);
        } else if lower.starts_with("@data") {
            saw_data = true;
            break;
        } else {
            return Err(syntax(line_no, 1, "expected @relation, @attribute or @data"));
        }
    }
    if !saw_data {
        return Err(syntax(text.lines().count().max(1), 1, "missing @data section"));
    }

    let mut position: HashMap<&str, usize> = HashMap::new();
    for (idx, attr) in attributes.iter().enumerate() {
        if position.insert(attr.name.as_str(), idx).is_some() {
            return Err(DatasetError::Invalid(format!("duplicate attribute `{}`", attr.name)));
        }
    }
    // slot[attr] = (is_label, row)
    let mut slot: Vec<(bool, usize)> = vec![(false, usize::MAX); attributes.len()];
    for (row, name) in label_names.iter().enumerate() {
        let idx = *position
            .get(name.as_str())
            .ok_or_else(|| DatasetError::UnknownLabelName(name.clone()))?;
        slot[idx] = (true, row);
    }
    let mut feature_names = Vec::new();
    for (idx, attr) in attributes.iter().enumerate() {
        if !slot[idx].0 {
            slot[idx] = (false, feature_names.len());
            feature_names.push(attr.name.clone());
        }
    }
    let d = feature_names.len();
    let k = label_names.len();
    let n_attr = attributes.len();

    // instance-major buffers, transposed at the end
    let mut feat_rows: Vec<f64> = Vec::new();
    let mut label_rows: Vec<f64> = Vec::new();
    let mut values = vec![0.0; n_attr];

    for (line_no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let base_col = raw.len() - raw.trim_start().len() + 1;
        values.iter_mut().for_each(|v| *v = 0.0);
        if let Some(inner) = line.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| syntax(line_no, base_col + line.len(), "unterminated sparse row"))?;
            if !inner.trim().is_empty() {
                for (col, entry) in split_fields(inner, base_col + 1) {
                    let mut parts = entry.split_whitespace();
                    let (Some(idx_tok), Some(val_tok), None) = (parts.next(), parts.next(), parts.next()) else {
                        return Err(syntax(line_no, col, "sparse entry must be `index value`"));
                    };
                    let idx: usize = idx_tok
                        .parse()
                        .map_err(|_| syntax(line_no, col, format!("bad sparse index `{idx_tok}`")))?;
                    if idx >= n_attr {
                        return Err(syntax(line_no, col, format!("sparse index {idx} out of range")));
                    }
                    let val_col = col + entry.len() - val_tok.len();
                    values[idx] = parse_value(val_tok, line_no, val_col)?;
                }
            }
        } else {
            let mut count = 0;
            for (col, field) in split_fields(line, base_col) {
                if count >= n_attr {
                    return Err(syntax(line_no, col, format!("more than {n_attr} values")));
                }
                values[count] = parse_value(field, line_no, col)?;
                count += 1;
            }
            if count != n_attr {
                return Err(syntax(
                    line_no,
                    base_col + line.len(),
                    format!("expected {n_attr} values, found {count}"),
                ));
            }
        }

        let feat_start = feat_rows.len();
        feat_rows.resize(feat_start + d, 0.0);
        let label_start = label_rows.len();
        label_rows.resize(label_start + k, 0.0);
        for (idx, &v) in values.iter().enumerate() {
            let (is_label, row) = slot[idx];
            if is_label {
                if v != 0.0 && v != 1.0 {
                    return Err(DatasetError::NonBinaryLabel {
                        line: line_no,
                        label: attributes[idx].name.clone(),
                        value: v,
                    });
                }
                label_rows[label_start + row] = v;
            } else {
                feat_rows[feat_start + row] = v;
            }
        }
    }

    let n = feat_rows.len().checked_div(d).unwrap_or(label_rows.len() / k.max(1));
    let features = if d > 0 {
        DenseMatrix::new(n, d, feat_rows)
            .map_err(|e| DatasetError::Invalid(e.to_string()))?
            .transpose()
    } else {
        DenseMatrix::zeros(0, n)
    };
    let labels = if k > 0 {
        DenseMatrix::new(n, k, label_rows)
            .map_err(|e| DatasetError::Invalid(e.to_string()))?
            .transpose()
    } else {
        DenseMatrix::zeros(0, n)
    };
    MultiLabelDataset::new(features, labels, feature_names, label_names.to_vec())
}

/// Label names from a Mulan XML header, in document order. Nested label
/// hierarchies are flattened.
pub fn parse_label_header(xml: &str) -> Result<Vec<String>, DatasetError> {
    let doc = roxmltree::Document::parse(xml).map_err(|e| DatasetError::MalformedXml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "labels" {
        return Err(DatasetError::MalformedXml(format!(
            "root element is <{}>, expected <labels>",
            root.tag_name().name()
        )));
    }
    let mut names = Vec::new();
    for node in root
        .descendants()
        .filter(|n| n.is_element() && n.tag_name().name() == "label")
    {
        let name = node
            .attribute("name")
            .ok_or_else(|| DatasetError::MalformedXml("<label> without a name attribute".into()))?;
        names.push(name.to_string());
    }
    if names.is_empty() {
        return Err(DatasetError::EmptyLabelSet);
    }
    Ok(names)
}

fn read_file(path: &Path) -> Result<String, DatasetError> {
    std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a Mulan train/test pair sharing one XML label header.
pub fn load_mulan_pair(
    train_path: impl AsRef<Path>,
    test_path: impl AsRef<Path>,
    xml_path: impl AsRef<Path>,
) -> Result<DatasetPair, DatasetError> {
    let (train_path, test_path) = (train_path.as_ref(), test_path.as_ref());
    let labels = parse_label_header(&read_file(xml_path.as_ref())?)?;
    let train = parse_arff(&read_file(train_path)?, &labels)?;
    let test = parse_arff(&read_file(test_path)?, &labels)?;
    let stem = train_path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    let name = stem.strip_suffix("-train").unwrap_or(stem);
    DatasetPair::new(name, train, test)
}

/// Removes `floor(proportion · #positives)` positive label entries, chosen
/// uniformly without replacement from a generator seeded with `seed`.
pub fn corrupt_labels(
    dataset: &MultiLabelDataset,
    proportion: f64,
    seed: u64,
) -> Result<MultiLabelDataset, DatasetError> {
    if !(0.0..=1.0).contains(&proportion) {
        return Err(DatasetError::OutOfRange(proportion));
    }
    let positives: Vec<usize> = dataset
        .labels
        .as_slice()
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| (v == 1.0).then_some(i))
        .collect();
    // the epsilon absorbs products like 0.29 * 100 = 28.999999999999996
    let remove = ((proportion * positives.len() as f64) + 1e-9).floor() as usize;
    let remove = remove.min(positives.len());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = dataset.labels.as_slice().to_vec();
    for pick in rand::seq::index::sample(&mut rng, positives.len(), remove) {
        data[positives[pick]] = 0.0;
    }
    let (k, n) = dataset.labels.shape();
    let labels = DenseMatrix::new(k, n, data).map_err(|e| DatasetError::Invalid(e.to_string()))?;
    dataset.with_labels(labels)
}
