//! Closed categorical vocabularies used by the location survey records.

/// Declares a closed vocabulary: a fieldless enum with string names, parsing,
/// display and serde support through the string form.
macro_rules! vocabulary {
    (
        $(#[$meta:meta])*
        $name:ident, $field:literal {
            $($variant:ident => $text:literal),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];
            pub const NAMES: &'static [&'static str] = &[$($text),+];
            pub const FIELD: &'static str = $field;

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl std::str::FromStr for $name {
            type Err = $crate::Error;

            fn from_str(s: &str) -> $crate::Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err($crate::Error::Vocabulary {
                        field: $field.to_string(),
                        value: s.to_string(),
                    }),
                }
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> serde::Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

vocabulary! {
    AgeBucket, "age" {
        From18To24 => "18-24",
        From25To34 => "25-34",
        From35To44 => "35-44",
        From45To54 => "45-54",
        From55To64 => "55-64",
    }
}

vocabulary! {
    Gender, "gender" {
        Male => "male",
        Female => "female",
    }
}

vocabulary! {
    Marriage, "marriage" {
        Married => "married",
        NotMarried => "not married",
    }
}

vocabulary! {
    /// Self-reported privacy concern.
    PrivacyLevel, "privacy_level" {
        Very => "very",
        Moderately => "moderately",
        Slightly => "slightly",
        NotCare => "not_care",
    }
}

vocabulary! {
    /// The twenty place categories used as location semantics.
    LocationSemantic, "location" {
        Airport => "Airport",
        ArtGallery => "Art Gallery",
        Bank => "Bank",
        Bar => "Bar",
        BusStation => "Bus Station",
        Casino => "Casino",
        Cemetery => "Cemetery",
        Church => "Church",
        CompanyBuilding => "Company Building",
        ConventionCenter => "Convention Center",
        Hospital => "Hospital",
        Hotel => "Hotel",
        LawFirm => "Law Firm",
        Library => "Library",
        MovieTheater => "Movie Theater",
        PoliceStation => "Police Station",
        Restaurant => "Restaurant",
        ShoppingMall => "Shopping Mall",
        Spa => "Spa",
        Workplace => "Workplace",
    }
}

vocabulary! {
    TimeOfDay, "time" {
        WeekdayDay => "weekday_day",
        WeekdayNight => "weekday_night",
        Weekend => "weekend",
    }
}

vocabulary! {
    Companion, "companion" {
        Alone => "alone",
        Family => "family",
        Friends => "friends",
        Colleagues => "colleagues",
    }
}

vocabulary! {
    Emotion, "emotion" {
        Positive => "positive",
        Negative => "negative",
    }
}

vocabulary! {
    Audience, "audience" {
        Family => "Family",
        Friend => "Friend",
        Colleague => "Colleague",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_location_semantics() {
        assert_eq!(LocationSemantic::ALL.len(), 20);
        assert_eq!(LocationSemantic::NAMES.len(), 20);
    }

    #[test]
    fn parse_round_trip_and_rejects_unknown() {
        for &loc in LocationSemantic::ALL {
            assert_eq!(loc.as_str().parse::<LocationSemantic>().unwrap(), loc);
        }
        let err = "Zoo".parse::<LocationSemantic>().unwrap_err();
        assert!(matches!(err, crate::Error::Vocabulary { ref field, .. } if field == "location"));
    }
}
