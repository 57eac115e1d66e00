use super::Norm;
use crate::error::{Error, Result};
use crate::group::{Element, FiniteGroup, GroupDescriptor};
use crate::rational::{self, int, Rational};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormMeta {
    pub name: String,
    pub diameter: Rational,
    /// 0 is a limit point of the values. Never true for a finite table.
    pub fine: bool,
    pub discrete: bool,
    /// Generators (as literals) the norm was built from, if any.
    pub generator_set: Vec<String>,
    /// Positivity off the identity is not claimed.
    pub pseudo: bool,
    /// Constant added off the identity when normalizing a q-norm.
    pub constant_added: Option<Rational>,
}

/// Exact values of a norm on every element of a finite group (or of a
/// finite subgroup such as `G'`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormTable {
    descriptor: GroupDescriptor,
    values: BTreeMap<Element, Rational>,
    meta: NormMeta,
}

impl NormTable {
    pub fn new(descriptor: GroupDescriptor, name: impl Into<String>, values: BTreeMap<Element, Rational>) -> Self {
        let diameter = values.values().copied().max().unwrap_or_else(|| int(0));
        let meta = NormMeta {
            name: name.into(),
            diameter,
            fine: false,
            discrete: true,
            generator_set: Vec::new(),
            pseudo: false,
            constant_added: None,
        };
        NormTable { descriptor, values, meta }
    }

    /// Tabulate `norm` over every element of `group`.
    pub fn from_norm<N: Norm>(group: &FiniteGroup, norm: &N) -> Result<Self> {
        let values = crate::par::map(group.elements(), |g| norm.norm(g));
        let values = group
            .elements()
            .iter()
            .cloned()
            .zip(values)
            .map(|(g, v)| v.map(|v| (g, v)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self::new(group.descriptor().clone(), norm.name(), values))
    }

    pub fn with_generator_set(mut self, gens: &[Element]) -> Self {
        self.meta.generator_set = gens.iter().map(|g| g.to_string()).collect();
        self
    }

    pub fn with_constant_added(mut self, c: Rational) -> Self {
        self.meta.constant_added = Some(c);
        self
    }

    pub fn into_pseudo(mut self) -> Self {
        self.meta.pseudo = true;
        self
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn meta(&self) -> &NormMeta {
        &self.meta
    }

    pub fn name(&self) -> &str {
        &self.meta.name
    }

    pub fn diameter(&self) -> Rational {
        self.meta.diameter
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, g: &Element) -> Option<Rational> {
        self.values.get(g).copied()
    }

    /// Domain elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.values.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, &Rational)> {
        self.values.iter()
    }

    /// Rows sorted by element literal, as written to JSON and TSV.
    pub fn sorted_rows(&self) -> Vec<(String, Rational)> {
        let mut rows: Vec<(String, Rational)> = self.values.iter().map(|(g, v)| (g.to_string(), *v)).collect();
        rows.sort();
        rows
    }

    pub fn to_json_value(&self) -> NormTableJson {
        NormTableJson {
            group: self.descriptor.to_string(),
            norm: self.meta.name.clone(),
            values: self.sorted_rows().into_iter().map(|(g, v)| (g, rational::to_string(&v))).collect(),
            meta: MetaJson {
                diameter: rational::to_string(&self.meta.diameter),
                fine: self.meta.fine,
                discrete: self.meta.discrete,
                generator_set: self.meta.generator_set.clone(),
                constant_added: self.meta.constant_added.map(|c| rational::to_string(&c)),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable") + "\n"
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "# group={}\tnorm={}\tdiameter={}\n",
            self.descriptor,
            self.meta.name,
            rational::to_string(&self.meta.diameter)
        );
        for (g, v) in self.sorted_rows() {
            out.push_str(&format!("{g}\t{}\n", rational::to_string(&v)));
        }
        out
    }

    /// Parse the JSON form, re-reading every element literal.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: NormTableJson = serde_json::from_str(s).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let descriptor: GroupDescriptor = j.group.parse()?;
        let mut values = BTreeMap::new();
        for (lit, v) in &j.values {
            let g = descriptor.parse_element(lit)?;
            let v = rational::parse(v).ok_or_else(|| Error::InvalidInput(format!("bad value `{v}`")))?;
            values.insert(g, v);
        }
        let mut t = NormTable::new(descriptor, j.norm, values);
        t.meta.fine = j.meta.fine;
        t.meta.discrete = j.meta.discrete;
        t.meta.generator_set = j.meta.generator_set;
        t.meta.constant_added = match &j.meta.constant_added {
            Some(c) => Some(rational::parse(c).ok_or_else(|| Error::InvalidInput(format!("bad constant `{c}`")))?),
            None => None,
        };
        let diameter = rational::parse(&j.meta.diameter)
            .ok_or_else(|| Error::InvalidInput(format!("bad diameter `{}`", j.meta.diameter)))?;
        if diameter != t.meta.diameter {
            return Err(Error::InvalidInput("diameter does not match values".into()));
        }
        Ok(t)
    }
}

impl Norm for NormTable {
    fn name(&self) -> String {
        self.meta.name.clone()
    }

    fn norm(&self, g: &Element) -> Result<Rational> {
        self.get(g).ok_or_else(|| Error::InvalidInput(format!("`{g}` is outside the table's domain")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NormTableJson {
    pub group: String,
    pub norm: String,
    pub values: Vec<(String, String)>,
    pub meta: MetaJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MetaJson {
    pub diameter: String,
    pub fine: bool,
    pub discrete: bool,
    pub generator_set: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant_added: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_LIMIT;
    use crate::norms::TrivialNorm;

    #[test]
    fn trivial_norm_table_on_s3() {
        let g = FiniteGroup::enumerate(&"sn:3".parse().unwrap(), DEFAULT_LIMIT).unwrap();
        let t = NormTable::from_norm(&g, &TrivialNorm).unwrap();
        assert_eq!(t.len(), 6);
        assert_eq!(t.diameter(), int(1));
        let json = t.to_json();
        assert_eq!(NormTable::from_json(&json).unwrap(), t);
        assert_eq!(t.to_tsv().lines().count(), 7);
        assert!(json.contains("\"()\""));
        assert!(!t.meta().fine && t.meta().discrete);
    }
}
