/** Wire types shared with the signcoach HTTP API and the fb/1 feedback
 * schema.  The UI computes no scores: everything here is read-only data the
 * service produced. */

export type Vec3 = [number, number, number];
export type Vec2 = [number, number];

/** The 20-joint skeleton, indices matching the serialized joint order. */
export const JOINT = {
  HIP_CENTER: 0,
  SPINE: 1,
  SHOULDER_CENTER: 2,
  HEAD: 3,
  SHOULDER_LEFT: 4,
  ELBOW_LEFT: 5,
  WRIST_LEFT: 6,
  HAND_LEFT: 7,
  SHOULDER_RIGHT: 8,
  ELBOW_RIGHT: 9,
  WRIST_RIGHT: 10,
  HAND_RIGHT: 11,
  HIP_LEFT: 12,
  KNEE_LEFT: 13,
  ANKLE_LEFT: 14,
  FOOT_LEFT: 15,
  HIP_RIGHT: 16,
  KNEE_RIGHT: 17,
  ANKLE_RIGHT: 18,
  FOOT_RIGHT: 19,
} as const;

export const N_JOINTS = 20;

/** Stick-figure bone list as [parent, child] joint index pairs. */
export const BONES: ReadonlyArray<readonly [number, number]> = [
  [JOINT.HIP_CENTER, JOINT.SPINE],
  [JOINT.SPINE, JOINT.SHOULDER_CENTER],
  [JOINT.SHOULDER_CENTER, JOINT.HEAD],
  [JOINT.SHOULDER_CENTER, JOINT.SHOULDER_LEFT],
  [JOINT.SHOULDER_LEFT, JOINT.ELBOW_LEFT],
  [JOINT.ELBOW_LEFT, JOINT.WRIST_LEFT],
  [JOINT.WRIST_LEFT, JOINT.HAND_LEFT],
  [JOINT.SHOULDER_CENTER, JOINT.SHOULDER_RIGHT],
  [JOINT.SHOULDER_RIGHT, JOINT.ELBOW_RIGHT],
  [JOINT.ELBOW_RIGHT, JOINT.WRIST_RIGHT],
  [JOINT.WRIST_RIGHT, JOINT.HAND_RIGHT],
  [JOINT.HIP_CENTER, JOINT.HIP_LEFT],
  [JOINT.HIP_LEFT, JOINT.KNEE_LEFT],
  [JOINT.KNEE_LEFT, JOINT.ANKLE_LEFT],
  [JOINT.ANKLE_LEFT, JOINT.FOOT_LEFT],
  [JOINT.HIP_CENTER, JOINT.HIP_RIGHT],
  [JOINT.HIP_RIGHT, JOINT.KNEE_RIGHT],
  [JOINT.KNEE_RIGHT, JOINT.ANKLE_RIGHT],
  [JOINT.ANKLE_RIGHT, JOINT.FOOT_RIGHT],
];

/** Limb grouping mirrored from the service's color-coding payload. */
export const LIMBS: Record<string, ReadonlyArray<number>> = {
  left_arm: [JOINT.SHOULDER_LEFT, JOINT.ELBOW_LEFT, JOINT.WRIST_LEFT, JOINT.HAND_LEFT],
  right_arm: [JOINT.SHOULDER_RIGHT, JOINT.ELBOW_RIGHT, JOINT.WRIST_RIGHT, JOINT.HAND_RIGHT],
  torso: [JOINT.SPINE, JOINT.SHOULDER_CENTER],
  head: [JOINT.HEAD],
};

export interface WireFrame {
  t: number;
  joints: Vec3[];
  tracked: boolean[];
}

export interface WireSequence {
  rate_hz: number;
  frames: WireFrame[];
}

export const FB_SCHEMA = "fb/1";

export type FeedbackMode =
  | "recast"
  | "mirror"
  | "path_arrows"
  | "color_coding"
  | "zoom";

export const FEEDBACK_MODES: ReadonlyArray<FeedbackMode> = [
  "recast", "mirror", "path_arrows", "color_coding", "zoom",
];

export const THRESHOLD_PRESETS: ReadonlyArray<number> = [40, 60, 80];

export interface RecastArtifact {
  schema: typeof FB_SCHEMA;
  mode: "recast";
  template_id: string;
  replay: WireSequence | null;
}

export interface MirrorArtifact {
  schema: typeof FB_SCHEMA;
  mode: "mirror";
  reference: WireSequence;
  attempt: WireSequence;
  pairs: [number, number][];
}

export interface WireArrow {
  joint: number;
  ref_index: number;
  from: Vec3;
  to: Vec3;
}

export interface PathArrowsArtifact {
  schema: typeof FB_SCHEMA;
  mode: "path_arrows";
  attempt: WireSequence;
  arrows: WireArrow[];
}

export interface ColorCodingArtifact {
  schema: typeof FB_SCHEMA;
  mode: "color_coding";
  attempt: WireSequence;
  limb_status: Record<string, "red" | "green">;
}

export interface ZoomArtifact {
  schema: typeof FB_SCHEMA;
  mode: "zoom";
  hand: "L" | "R";
  handshape_id: string;
  keyframe_t: number;
  camera: { target_joint: number; distance: number };
}

export type FeedbackArtifact =
  | RecastArtifact
  | MirrorArtifact
  | PathArrowsArtifact
  | ColorCodingArtifact
  | ZoomArtifact;

export interface SessionStateDto {
  phase: string;
  sign_index: number;
  attempts_made: number;
  results_count: number;
  current_sign?: string;
  remaining_ms?: number;
  artifact?: FeedbackArtifact;
}

export interface ComparisonResultDto {
  template_id: string;
  movement_score: number;
  handshape_score: number;
  accuracy: number;
  passed: boolean;
  threshold_used: number;
  [key: string]: unknown;
}

export interface ApiErrorDto {
  code: string;
  message: string;
  detail: unknown;
}
