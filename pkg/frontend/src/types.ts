import { z } from "zod";

// Wire types for the interview api-service. Schemas are validated at the
// boundary so a drifting server fails loudly instead of rendering garbage.

export const CreateSessionResponseSchema = z.object({
  session_id: z.string(),
  message: z.string(),
  ended: z.boolean(),
});
export type CreateSessionResponse = z.infer<typeof CreateSessionResponseSchema>;

export const MessageResponseSchema = z.object({
  session_id: z.string().optional(),
  message: z.string(),
  ended: z.boolean(),
  turn: z.number().int(),
});
export type MessageResponse = z.infer<typeof MessageResponseSchema>;

export const NoteSchema = z.object({
  text: z.string(),
  source_turn: z.number().int(),
  subtopic_id: z.string().nullable(),
  topic_id: z.string().nullable(),
});
export type Note = z.infer<typeof NoteSchema>;

export const SubtopicSchema = z.object({
  id: z.string(),
  description: z.string(),
  parent_topic_id: z.string(),
  origin: z.enum(["predefined", "emergent"]),
  created_turn: z.number().int().optional(),
});
export type Subtopic = z.infer<typeof SubtopicSchema>;

export const TopicSchema = z.object({
  id: z.string(),
  title: z.string(),
  subtopics: z.array(SubtopicSchema),
});
export type Topic = z.infer<typeof TopicSchema>;

export const SubtopicEntrySchema = z.object({
  status: z.enum(["pending", "in_progress", "covered"]),
  notes: z.array(NoteSchema),
  summary: z.string().nullable(),
});
export type SubtopicEntry = z.infer<typeof SubtopicEntrySchema>;

export const AgendaSchema = z.object({
  guide: z.object({ topics: z.array(TopicSchema) }),
  entries: z.record(SubtopicEntrySchema),
  topic_summaries: z.record(z.string()),
  topic_notes: z.record(z.array(NoteSchema)),
  session_notes: z.array(NoteSchema),
  planner_suggestions: z.unknown().nullable(),
});
export type Agenda = z.infer<typeof AgendaSchema>;

export const AgendaSnapshotSchema = z.object({
  session_id: z.string(),
  phase: z.enum(["created", "active", "ended"]),
  agenda: AgendaSchema,
  utility_series: z.array(z.record(z.unknown())),
});
export type AgendaSnapshot = z.infer<typeof AgendaSnapshotSchema>;

// -- console-side state

export type ConsolePhase = "landing" | "chatting" | "review";

export type Role = "interviewer" | "participant";

export interface ChatMessage {
  role: Role;
  text: string;
  turnIndex: number;
}

export type ConnectionStatus = "idle" | "connecting" | "live" | "closed" | "error";
