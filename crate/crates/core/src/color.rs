use std::fmt;

use serde::{Deserialize, Serialize};

/// Subset of `{red, blue}` attached to a product edge or triple.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Colors(u8);

impl Colors {
    pub const NONE: Colors = Colors(0);
    pub const RED: Colors = Colors(1);
    pub const BLUE: Colors = Colors(2);
    pub const BOTH: Colors = Colors(3);

    pub fn new(red: bool, blue: bool) -> Self {
        Colors(red as u8 | ((blue as u8) << 1))
    }

    pub fn red(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn blue(self) -> bool {
        self.0 & 2 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn has(self, c: Color) -> bool {
        match c {
            Color::Red => self.red(),
            Color::Blue => self.blue(),
        }
    }

    pub fn with(self, c: Color) -> Self {
        self | Colors::from(c)
    }

    pub fn without(self, c: Color) -> Self {
        Colors(self.0 & !Colors::from(c).0)
    }
}

impl std::ops::BitOr for Colors {
    type Output = Colors;
    fn bitor(self, rhs: Colors) -> Colors {
        Colors(self.0 | rhs.0)
    }
}

impl std::ops::BitOrAssign for Colors {
    fn bitor_assign(&mut self, rhs: Colors) {
        self.0 |= rhs.0;
    }
}

impl fmt::Display for Colors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.red(), self.blue()) {
            (false, false) => "-",
            (true, false) => "R",
            (false, true) => "B",
            (true, true) => "RB",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl From<Color> for Colors {
    fn from(c: Color) -> Colors {
        match c {
            Color::Red => Colors::RED,
            Color::Blue => Colors::BLUE,
        }
    }
}
