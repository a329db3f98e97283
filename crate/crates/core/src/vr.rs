//! Events, second-order events and the strong/weak classification of event
//! registries.
//!
//! An event is a named set tied to a world label and a subject label. A
//! registry collects one subject's events; it is strong when every event
//! value is wellfounded and weak as soon as a single non-wellfounded value
//! appears, since such a value lies outside every wellfounded universe.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperset::{decorate, HyperSet};
use crate::system::{System, SystemRepr};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub name: String,
    pub world_ref: String,
    pub subject: String,
    pub value: HyperSet,
}

/// The canonical witness of "an event with this description occurred": the
/// singleton of the event's value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondOrderEvent {
    pub of: Event,
    pub value: HyperSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventClass {
    Wellfounded,
    NonWellfounded,
}

impl std::fmt::Display for EventClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EventClass::Wellfounded => write!(f, "Wellfounded"),
            EventClass::NonWellfounded => write!(f, "NonWellfounded"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniverseClass {
    StrongVR,
    WeakVR,
}

impl std::fmt::Display for UniverseClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UniverseClass::StrongVR => write!(f, "StrongVR"),
            UniverseClass::WeakVR => write!(f, "WeakVR"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct UniverseRegistry {
    pub subject: String,
    events: Vec<Event>,
}

impl UniverseRegistry {
    pub fn new(subject: impl Into<String>) -> Self {
        UniverseRegistry {
            subject: subject.into(),
            events: Vec::new(),
        }
    }

    /// Registers an event by its picture. The value stored is the picture's
    /// decoration, so observationally equivalent pictures register equal
    /// values.
    pub fn register_event(
        &mut self,
        name: impl Into<String>,
        world_ref: impl Into<String>,
        picture: &System,
    ) -> Result<&Event> {
        let name = name.into();
        if self.events.iter().any(|e| e.name == name) {
            return Err(Error::DuplicateName(name));
        }
        self.events.push(Event {
            name,
            world_ref: world_ref.into(),
            subject: self.subject.clone(),
            value: decorate(picture),
        });
        Ok(self.events.last().expect("just pushed"))
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn get(&self, name: &str) -> Option<&Event> {
        self.events.iter().find(|e| e.name == name)
    }
}

pub fn classify_event(e: &Event) -> EventClass {
    if e.value.is_wellfounded() {
        EventClass::Wellfounded
    } else {
        EventClass::NonWellfounded
    }
}

pub fn second_order(e: &Event) -> SecondOrderEvent {
    SecondOrderEvent {
        of: e.clone(),
        value: HyperSet::singleton(&e.value),
    }
}

/// Strong iff every event value is wellfounded; weak iff at least one is
/// not. Errors on an empty registry.
pub fn classify_universe(reg: &UniverseRegistry) -> Result<UniverseClass> {
    if reg.events().is_empty() {
        return Err(Error::EmptyRegistry);
    }
    if reg
        .events()
        .iter()
        .all(|e| classify_event(e) == EventClass::Wellfounded)
    {
        Ok(UniverseClass::StrongVR)
    } else {
        Ok(UniverseClass::WeakVR)
    }
}

/// True iff every event value of `strong` occurs, up to set equality, among
/// the event values of `weak`.
pub fn embed_check(strong: &UniverseRegistry, weak: &UniverseRegistry) -> bool {
    strong
        .events()
        .iter()
        .all(|e| weak.events().iter().any(|w| w.value == e.value))
}

// ---------- serialization ----------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EventRepr {
    pub name: String,
    pub world_ref: String,
    pub system: SystemRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegistryRepr {
    pub subject: String,
    pub events: Vec<EventRepr>,
}

impl RegistryRepr {
    pub fn to_registry(&self) -> Result<UniverseRegistry> {
        let mut reg = UniverseRegistry::new(self.subject.clone());
        for e in &self.events {
            reg.register_event(e.name.clone(), e.world_ref.clone(), &e.system.to_system()?)?;
        }
        Ok(reg)
    }
}

impl From<&UniverseRegistry> for RegistryRepr {
    fn from(reg: &UniverseRegistry) -> Self {
        RegistryRepr {
            subject: reg.subject.clone(),
            events: reg
                .events()
                .iter()
                .map(|e| EventRepr {
                    name: e.name.clone(),
                    world_ref: e.world_ref.clone(),
                    system: SystemRepr::from(e.value.picture()),
                })
                .collect(),
        }
    }
}

/// Machine-readable classification result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub subject: String,
    pub verdict: UniverseClass,
    pub events: Vec<(String, EventClass)>,
}

pub fn classification_report(reg: &UniverseRegistry) -> Result<ClassificationReport> {
    Ok(ClassificationReport {
        subject: reg.subject.clone(),
        verdict: classify_universe(reg)?,
        events: reg
            .events()
            .iter()
            .map(|e| (e.name.clone(), classify_event(e)))
            .collect(),
    })
}

impl ClassificationReport {
    pub fn render_text(&self) -> String {
        let mut out = format!("subject: {}\n", self.subject);
        for (name, class) in &self.events {
            out.push_str(&format!("  {name}: {class}\n"));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::parse_system;
    use crate::modal::{char_formula, satisfies, Formula};

    fn sys(text: &str) -> System {
        parse_system(text).unwrap()
    }

    fn escher() -> System {
        sys("s0={s3} s1={s0} s2={s1} s3={s2} root s3")
    }

    #[test]
    fn register_and_classify() {
        let mut reg = UniverseRegistry::new("S");
        let e = reg
            .register_event("look-at-cup", "P_cup", &sys("a={b,c} b={} c={} root a"))
            .unwrap()
            .clone();
        assert_eq!(classify_event(&e), EventClass::Wellfounded);

        let e = reg
            .register_event("escher-staircase", "P_stairs", &escher())
            .unwrap()
            .clone();
        assert_eq!(e.value, HyperSet::omega());
        assert_eq!(classify_event(&e), EventClass::NonWellfounded);
    }

    #[test]
    fn duplicate_names_rejected() {
        let mut reg = UniverseRegistry::new("S");
        reg.register_event("e", "P", &sys("x={} root x")).unwrap();
        assert!(matches!(
            reg.register_event("e", "P", &sys("x={} root x")),
            Err(Error::DuplicateName(_))
        ));
    }

    #[test]
    fn bisimilar_pictures_register_equal_values() {
        let mut reg = UniverseRegistry::new("S");
        let a = reg
            .register_event("loop", "P", &sys("x={x} root x"))
            .unwrap()
            .clone();
        let b = reg
            .register_event("two-cycle", "P", &sys("p={q} q={p} root p"))
            .unwrap()
            .clone();
        assert_eq!(a.value, b.value);
        assert_eq!(classify_event(&a), classify_event(&b));
    }

    #[test]
    fn second_order_values() {
        let mut reg = UniverseRegistry::new("S");
        let empty = reg
            .register_event("empty", "P", &sys("x={} root x"))
            .unwrap()
            .clone();
        let so = second_order(&empty);
        assert_eq!(so.value, HyperSet::singleton(&HyperSet::empty()));

        let omega = reg
            .register_event("omega", "P", &escher())
            .unwrap()
            .clone();
        // {Ω} = Ω
        assert_eq!(second_order(&omega).value, HyperSet::omega());
    }

    #[test]
    fn second_order_witnesses_diamond() {
        let mut reg = UniverseRegistry::new("S");
        reg.register_event("vn2", "P", &sys("n2={n1,n0} n1={n0} n0={} root n2"))
            .unwrap();
        reg.register_event("omega", "P", &escher()).unwrap();
        for e in reg.events() {
            let so = second_order(e);
            for k in 0..4 {
                let phi = char_formula(&e.value, k).unwrap();
                assert!(satisfies(&so.value, &Formula::dia(phi)));
            }
        }
    }

    #[test]
    fn universe_classification() {
        let mut reg = UniverseRegistry::new("S");
        assert!(matches!(classify_universe(&reg), Err(Error::EmptyRegistry)));
        reg.register_event("vn0", "P", &sys("x={} root x")).unwrap();
        reg.register_event("vn1", "P", &sys("a={b} b={} root a"))
            .unwrap();
        assert_eq!(classify_universe(&reg).unwrap(), UniverseClass::StrongVR);
        reg.register_event("escher", "P", &escher()).unwrap();
        assert_eq!(classify_universe(&reg).unwrap(), UniverseClass::WeakVR);
    }

    #[test]
    fn only_omega_is_weak() {
        let mut reg = UniverseRegistry::new("S");
        reg.register_event("omega", "P", &sys("x={x} root x"))
            .unwrap();
        assert_eq!(classify_universe(&reg).unwrap(), UniverseClass::WeakVR);
    }

    #[test]
    fn embedding() {
        let mut strong = UniverseRegistry::new("S");
        strong.register_event("vn0", "P", &sys("x={} root x")).unwrap();
        strong
            .register_event("vn1", "P", &sys("a={b} b={} root a"))
            .unwrap();

        let mut weak = UniverseRegistry::new("S");
        // different pictures of the same sets, plus Ω
        weak.register_event("zero", "P", &sys("y={} root y")).unwrap();
        weak.register_event("one", "P", &sys("p={q} q={} root p"))
            .unwrap();
        weak.register_event("omega", "P", &escher()).unwrap();
        assert!(embed_check(&strong, &weak));
        assert!(!embed_check(&weak, &strong));

        let mut vn2_only = UniverseRegistry::new("S");
        vn2_only
            .register_event("vn2", "P", &sys("n2={n1,n0} n1={n0} n0={} root n2"))
            .unwrap();
        let mut omega_only = UniverseRegistry::new("S");
        omega_only
            .register_event("omega", "P", &sys("x={x} root x"))
            .unwrap();
        assert!(!embed_check(&vn2_only, &omega_only));
    }

    #[test]
    fn registry_json_round_trip() {
        let mut reg = UniverseRegistry::new("S");
        reg.register_event("vn1", "P_a", &sys("a={b} b={} root a"))
            .unwrap();
        reg.register_event("omega", "P_b", &escher()).unwrap();
        let repr = RegistryRepr::from(&reg);
        let json = serde_json::to_string_pretty(&repr).unwrap();
        let back: RegistryRepr = serde_json::from_str(&json).unwrap();
        let reg2 = back.to_registry().unwrap();
        assert_eq!(reg.events().len(), reg2.events().len());
        for (e1, e2) in reg.events().iter().zip(reg2.events()) {
            assert_eq!(e1.value, e2.value);
        }
    }

    #[test]
    fn report_renders() {
        let mut reg = UniverseRegistry::new("S");
        reg.register_event("omega", "P", &escher()).unwrap();
        let report = classification_report(&reg).unwrap();
        let text = report.render_text();
        assert!(text.contains("omega: NonWellfounded"));
        assert!(text.contains("verdict: WeakVR"));
        serde_json::to_string(&report).unwrap();
    }
}
