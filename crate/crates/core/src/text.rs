use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Symbol = u32;

/// A string over the integer alphabet `0..alphabet_size`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Text {
    symbols: Vec<Symbol>,
    alphabet_size: u32,
}

impl Text {
    pub fn new(symbols: Vec<Symbol>, alphabet_size: u32) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::param("alphabet_size must be positive"));
        }
        if let Some((pos, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| s >= alphabet_size) {
            return Err(Error::SymbolOutOfRange { pos, symbol, alphabet_size });
        }
        Ok(Text { symbols, alphabet_size })
    }

    /// Bytes as codes over the full byte alphabet.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        Text { symbols: bytes.iter().map(|&b| b as Symbol).collect(), alphabet_size: 256 }
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    /// Same symbols, viewed over a larger alphabet.
    pub fn widen(mut self, alphabet_size: u32) -> Result<Self> {
        if alphabet_size < self.alphabet_size {
            return Err(Error::param(format!(
                "cannot narrow alphabet from {} to {alphabet_size}",
                self.alphabet_size
            )));
        }
        self.alphabet_size = alphabet_size;
        Ok(self)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Text {
        Text { symbols: self.symbols[range].to_vec(), alphabet_size: self.alphabet_size }
    }
}

impl Deref for Text {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.symbols
    }
}

impl AsRef<[Symbol]> for Text {
    fn as_ref(&self) -> &[Symbol] {
        &self.symbols
    }
}

impl From<&str> for Text {
    fn from(s: &str) -> Self {
        Text::from_bytes(s.as_bytes())
    }
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let printable = self.alphabet_size <= 256
            && self.symbols.iter().all(|&s| (0x20..0x7f).contains(&s));
        if printable {
            let s: String = self.symbols.iter().map(|&c| c as u8 as char).collect();
            write!(f, "Text({s:?}/{})", self.alphabet_size)
        } else {
            write!(f, "Text({:?}/{})", self.symbols, self.alphabet_size)
        }
    }
}

/// File encodings for symbol streams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Codec {
    /// One byte per symbol; alphabet of 256.
    #[default]
    Raw,
    /// Two bytes per symbol, big-endian; alphabet of 65536.
    Hex16,
}

impl Codec {
    pub fn decode(self, bytes: &[u8]) -> Result<Text> {
        match self {
            Codec::Raw => Ok(Text::from_bytes(bytes)),
            Codec::Hex16 => {
                if bytes.len() % 2 != 0 {
                    return Err(Error::param("hex16 input has odd byte length"));
                }
                let symbols = bytes
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]) as Symbol)
                    .collect();
                Text::new(symbols, 1 << 16)
            }
        }
    }

    pub fn encode(self, text: &Text) -> Result<Vec<u8>> {
        let limit: u64 = match self {
            Codec::Raw => 256,
            Codec::Hex16 => 1 << 16,
        };
        if let Some((pos, &symbol)) =
            text.iter().enumerate().find(|(_, &s)| u64::from(s) >= limit)
        {
            return Err(Error::SymbolOutOfRange { pos, symbol, alphabet_size: limit as u32 });
        }
        Ok(match self {
            Codec::Raw => text.iter().map(|&s| s as u8).collect(),
            Codec::Hex16 => text.iter().flat_map(|&s| (s as u16).to_be_bytes()).collect(),
        })
    }
}

impl FromStr for Codec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Codec::Raw),
            "hex16" => Ok(Codec::Hex16),
            other => Err(Error::param(format!("unknown codec {other:?} (expected raw or hex16)"))),
        }
    }
}
