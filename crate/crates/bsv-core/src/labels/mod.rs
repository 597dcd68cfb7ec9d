//! Body-segment label algebra.
//!
//! Fourteen body segments plus background. Raw 24-part masks are regrouped
//! into these, corrected against the body's medial and transverse lines,
//! projected into 3D, propagated onto the fitted mesh, and finally used to
//! cut per-segment sub-meshes.

mod extract;
mod mask;
mod project;
mod relabel;

pub use extract::extract_segment;
pub use mask::{synthesize_raw_mask, RawMaskOptions, RegroupTable, SegmentationMask};
pub use project::{project_labels_to_cloud, propagate_labels_to_mesh};
pub use relabel::{regroup_24_to_14, relabel_by_body_lines, ViewSide};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabelError {
    #[error("raw mask value {0} is not covered by the regroup table")]
    UnmappedValue(u8),
    #[error("landmark {0:?} is missing")]
    MissingLandmark(String),
    #[error("landmark {name:?} has confidence {confidence}, below the required {required}")]
    LowConfidence { name: String, confidence: f64, required: f64 },
    #[error("mask is {mask_w}x{mask_h} but depth image is {depth_w}x{depth_h}")]
    DimensionMismatch { mask_w: usize, mask_h: usize, depth_w: usize, depth_h: usize },
    #[error("point cloud carries no labels")]
    UnlabeledCloud,
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("label byte {0} is not a valid segment label")]
    InvalidLabelByte(u8),
}

/// One of the 14 body segments, or background.
///
/// Ordinal order (the `u8` value) breaks ties wherever a deterministic
/// choice between labels is needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum SegmentLabel {
    Background = 0,
    Head = 1,
    Torso = 2,
    LeftArm = 3,
    RightArm = 4,
    LeftForearm = 5,
    RightForearm = 6,
    LeftHand = 7,
    RightHand = 8,
    LeftThigh = 9,
    RightThigh = 10,
    LeftShin = 11,
    RightShin = 12,
    LeftFoot = 13,
    RightFoot = 14,
}

/// Subject side of a lateralized segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Limb membership: arm chain or leg chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimbFamily {
    Arm,
    Leg,
}

/// Position along a limb chain. `Upper` is arm/thigh, `Lower` is
/// forearm/shin, `End` is hand/foot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimbTier {
    Upper,
    Lower,
    End,
}

impl SegmentLabel {
    pub const ALL_BODY: [SegmentLabel; 14] = [
        SegmentLabel::Head,
        SegmentLabel::Torso,
        SegmentLabel::LeftArm,
        SegmentLabel::RightArm,
        SegmentLabel::LeftForearm,
        SegmentLabel::RightForearm,
        SegmentLabel::LeftHand,
        SegmentLabel::RightHand,
        SegmentLabel::LeftThigh,
        SegmentLabel::RightThigh,
        SegmentLabel::LeftShin,
        SegmentLabel::RightShin,
        SegmentLabel::LeftFoot,
        SegmentLabel::RightFoot,
    ];

    /// The nine segments whose volumes are evaluated (extremities and head
    /// are dropped before registration).
    pub const EVALUATED: [SegmentLabel; 9] = [
        SegmentLabel::Torso,
        SegmentLabel::LeftArm,
        SegmentLabel::RightArm,
        SegmentLabel::LeftForearm,
        SegmentLabel::RightForearm,
        SegmentLabel::LeftThigh,
        SegmentLabel::RightThigh,
        SegmentLabel::LeftShin,
        SegmentLabel::RightShin,
    ];

    pub fn from_byte(b: u8) -> Result<Self, LabelError> {
        use SegmentLabel::*;
        Ok(match b {
            0 => Background,
            1 => Head,
            2 => Torso,
            3 => LeftArm,
            4 => RightArm,
            5 => LeftForearm,
            6 => RightForearm,
            7 => LeftHand,
            8 => RightHand,
            9 => LeftThigh,
            10 => RightThigh,
            11 => LeftShin,
            12 => RightShin,
            13 => LeftFoot,
            14 => RightFoot,
            other => return Err(LabelError::InvalidLabelByte(other)),
        })
    }

    pub fn as_byte(self) -> u8 {
        self as u8
    }

    /// Head, hands, and feet: excluded from the cloud before registration.
    pub fn is_extremity(self) -> bool {
        use SegmentLabel::*;
        matches!(self, Head | LeftHand | RightHand | LeftFoot | RightFoot)
    }

    pub fn side(self) -> Option<Side> {
        use SegmentLabel::*;
        match self {
            LeftArm | LeftForearm | LeftHand | LeftThigh | LeftShin | LeftFoot => Some(Side::Left),
            RightArm | RightForearm | RightHand | RightThigh | RightShin | RightFoot => {
                Some(Side::Right)
            }
            _ => None,
        }
    }

    pub fn family(self) -> Option<LimbFamily> {
        use SegmentLabel::*;
        match self {
            LeftArm | RightArm | LeftForearm | RightForearm | LeftHand | RightHand => {
                Some(LimbFamily::Arm)
            }
            LeftThigh | RightThigh | LeftShin | RightShin | LeftFoot | RightFoot => {
                Some(LimbFamily::Leg)
            }
            _ => None,
        }
    }

    pub fn tier(self) -> Option<LimbTier> {
        use SegmentLabel::*;
        match self {
            LeftArm | RightArm | LeftThigh | RightThigh => Some(LimbTier::Upper),
            LeftForearm | RightForearm | LeftShin | RightShin => Some(LimbTier::Lower),
            LeftHand | RightHand | LeftFoot | RightFoot => Some(LimbTier::End),
            _ => None,
        }
    }

    /// Limb label for a given family, tier, and side.
    pub fn limb(family: LimbFamily, tier: LimbTier, side: Side) -> SegmentLabel {
        use SegmentLabel::*;
        match (family, tier, side) {
            (LimbFamily::Arm, LimbTier::Upper, Side::Left) => LeftArm,
            (LimbFamily::Arm, LimbTier::Upper, Side::Right) => RightArm,
            (LimbFamily::Arm, LimbTier::Lower, Side::Left) => LeftForearm,
            (LimbFamily::Arm, LimbTier::Lower, Side::Right) => RightForearm,
            (LimbFamily::Arm, LimbTier::End, Side::Left) => LeftHand,
            (LimbFamily::Arm, LimbTier::End, Side::Right) => RightHand,
            (LimbFamily::Leg, LimbTier::Upper, Side::Left) => LeftThigh,
            (LimbFamily::Leg, LimbTier::Upper, Side::Right) => RightThigh,
            (LimbFamily::Leg, LimbTier::Lower, Side::Left) => LeftShin,
            (LimbFamily::Leg, LimbTier::Lower, Side::Right) => RightShin,
            (LimbFamily::Leg, LimbTier::End, Side::Left) => LeftFoot,
            (LimbFamily::Leg, LimbTier::End, Side::Right) => RightFoot,
        }
    }

    /// Human-readable name used in reports and CSV headers.
    pub fn name(self) -> &'static str {
        use SegmentLabel::*;
        match self {
            Background => "background",
            Head => "head",
            Torso => "torso",
            LeftArm => "left_arm",
            RightArm => "right_arm",
            LeftForearm => "left_forearm",
            RightForearm => "right_forearm",
            LeftHand => "left_hand",
            RightHand => "right_hand",
            LeftThigh => "left_thigh",
            RightThigh => "right_thigh",
            LeftShin => "left_shin",
            RightShin => "right_shin",
            LeftFoot => "left_foot",
            RightFoot => "right_foot",
        }
    }
}

/// A named 2D keypoint with detection confidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Landmark {
    pub x: f64,
    pub y: f64,
    pub confidence: f64,
}

/// Named image-space keypoints. The full set carries 71 entries; the
/// correction logic only requires shoulders, hips, elbows, wrists, knees,
/// and ankles.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LandmarkSet {
    pub landmarks: HashMap<String, Landmark>,
}

/// Confidence below which a required landmark is rejected.
pub const LANDMARK_CONFIDENCE: f64 = 0.75;

/// Landmarks that must be present (with sufficient confidence) before the
/// label-correction operations run.
pub const REQUIRED_LANDMARKS: [&str; 12] = [
    "left_shoulder",
    "right_shoulder",
    "left_hip",
    "right_hip",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
];

impl LandmarkSet {
    pub fn insert(&mut self, name: &str, x: f64, y: f64, confidence: f64) {
        self.landmarks.insert(name.to_string(), Landmark { x, y, confidence });
    }

    /// Fetch a landmark, requiring presence and confidence.
    pub fn require(&self, name: &str) -> Result<Landmark, LabelError> {
        let lm = self
            .landmarks
            .get(name)
            .copied()
            .ok_or_else(|| LabelError::MissingLandmark(name.to_string()))?;
        if lm.confidence < LANDMARK_CONFIDENCE {
            return Err(LabelError::LowConfidence {
                name: name.to_string(),
                confidence: lm.confidence,
                required: LANDMARK_CONFIDENCE,
            });
        }
        Ok(lm)
    }

    /// Check every landmark in [`REQUIRED_LANDMARKS`].
    pub fn validate_required(&self) -> Result<(), LabelError> {
        for name in REQUIRED_LANDMARKS {
            self.require(name)?;
        }
        Ok(())
    }
}
