use std::collections::BTreeMap;

/// Anything that can be looked up by name in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

/// Name-keyed collection of interchangeable strategies.
pub struct Registry<T: ?Sized + Named> {
    entries: BTreeMap<&'static str, Box<T>>,
    default: &'static str,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(default: &'static str) -> Self {
        Registry { entries: BTreeMap::new(), default }
    }

    pub fn register(&mut self, strategy: Box<T>) -> &mut Self {
        let name = strategy.name();
        assert!(self.entries.insert(name, strategy).is_none(), "duplicate strategy {name}");
        self
    }

    pub fn with(mut self, strategy: Box<T>) -> Self {
        self.register(strategy);
        self
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn default_strategy(&self) -> &T {
        self.get(self.default).expect("default strategy registered")
    }

    pub fn default_name(&self) -> &'static str {
        self.default
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    /// Resolves a user-supplied name, listing the alternatives on failure.
    pub fn resolve(&self, name: &str) -> Result<&T, UnknownStrategy> {
        self.get(name).ok_or_else(|| UnknownStrategy {
            name: name.to_string(),
            known: self.names().collect::<Vec<_>>().join(", "),
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown strategy {name:?} (known: {known})")]
pub struct UnknownStrategy {
    pub name: String,
    pub known: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named {
        fn greet(&self) -> String;
    }
    struct Hi;
    impl Named for Hi {
        fn name(&self) -> &'static str {
            "hi"
        }
    }
    impl Greeter for Hi {
        fn greet(&self) -> String {
            "hi".into()
        }
    }

    #[test]
    fn lookup_and_errors() {
        let reg: Registry<dyn Greeter> = Registry::new("hi").with(Box::new(Hi));
        assert_eq!(reg.default_strategy().greet(), "hi");
        assert_eq!(reg.names().collect::<Vec<_>>(), ["hi"]);
        let err = reg.resolve("yo").err().unwrap();
        assert!(err.to_string().contains("known: hi"));
    }
}
