// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0

#include "shotad/prompts.hpp"

#include "shotad/errors.hpp"
#include "shotad/util.hpp"

namespace shotad {

std::uint64_t PromptBundle::hash() const {
  std::uint64_t h = fnv1a(system_text);
  h = fnv1a("\x1f", h);
  h = fnv1a(user_text, h);
  return h;
}

std::string make_char_text(const std::vector<CastMember>& cast) {
  if (cast.empty()) return "";
  std::string out = ". Possible characters: ";
  for (std::size_t i = 0; i < cast.size(); ++i) {
    if (i) out += ", ";
    out += cast[i].name + " (" + color_name_for_track(cast[i].track_id) + ")";
  }
  return out;
}

std::string render_key_shots(const std::vector<int>& current_labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < current_labels.size(); ++i) {
    if (i) out += ", ";
    out += "Shot " + std::to_string(current_labels[i]);
  }
  return out + "]";
}

std::string render_verb_list(const std::vector<std::string>& verbs) {
  std::string out = "[";
  for (std::size_t i = 0; i < verbs.size(); ++i) {
    if (i) out += ", ";
    out += "'" + verbs[i] + "'";
  }
  return out + "]";
}

long long stage2_word_limit(double duration, double speed_factor) {
  if (!(duration > 0) || !(speed_factor > 0))
    throw Error("stage2_word_limit: duration and speed factor must be positive");
  return static_cast<long long>(duration / speed_factor + 1);
}

PromptBundle build_stage1(const ContextWindow& window, Factor factor,
                          const std::string& thread_fragment,
                          VideoType video_type, const std::string& char_text) {
  if (window.current_labels.empty())
    throw Error("build_stage1: window has no current shots");

  std::string factor_numbers = "four";
  std::string additional_factor_text;
  switch (factor) {
    case Factor::kFacialExpression:
      additional_factor_text =
          "4. Describe the facial expressions of characters.\n";
      break;
    case Factor::kKeyObject:
      additional_factor_text =
          "4. Describe the key objects that characters interact with.\n";
      break;
    case Factor::kEnvironment:
      additional_factor_text =
          "4. Describe the environment, focusing on the location, furniture, "
          "entrances and exits, etc.\n";
      break;
    case Factor::kNone:
      factor_numbers = "three";
      break;
  }

  const std::string video_type_text = video_type_name(video_type);
  const std::string key_shots = render_key_shots(window.current_labels);
  const std::string label_type = "circles";

  std::vector<std::string> template_labels = {
      "Main characters", "Actions", "Character-character interactions"};
  switch (factor) {
    case Factor::kFacialExpression:
      template_labels.push_back("Facial expressions");
      break;
    case Factor::kKeyObject:
      template_labels.push_back("Key objects");
      break;
    case Factor::kEnvironment:
      template_labels.push_back("Environment");
      break;
    case Factor::kNone:
      break;
  }
  if (!thread_fragment.empty()) template_labels.push_back("Explanation");
  std::string answer_template = "Description:\n";
  for (std::size_t i = 0; i < template_labels.size(); ++i) {
    answer_template += std::to_string(i + 1) + ". " + template_labels[i] +
                       ": ''";
    answer_template += (i + 1 < template_labels.size()) ? ";\n" : ".";
  }

  PromptBundle b;
  b.user_text =
      "Please watch the following " + video_type_text +
      " clip, where different shot numbers are labelled on the top-left of "
      "each frame.\n"
      "Please briefly describe what happened in " + key_shots + " in the " +
      factor_numbers + " steps below:\n"
      "1. Identify main characters (if " + label_type + " are available)" +
      char_text + ";\n"
      "2. Describe the actions of characters, i.e., who is doing what, "
      "focusing on the movements;\n"
      "3. Describe the interactions between characters, such as looking;\n" +
      additional_factor_text +
      "Note, colored " + label_type + " are provided for character "
      "indications only, DO NOT mention them in the description. " +
      thread_fragment +
      "Make sure you do not hallucinate information.\n"
      "### Answer Template ###\n" +
      answer_template;
  b.expects_json = false;
  return b;
}

PromptBundle build_stage2(const std::string& stage1_text, double duration,
                          const DatasetProfile& profile, bool assistant_mode,
                          std::uint64_t seed) {
  if (stage1_text.empty()) throw Error("build_stage2: empty stage 1 text");
  if (profile.verb_list.empty() || profile.example_sentences.empty())
    throw ConfigError("build_stage2: profile lacks verbs or example pool");

  const std::string video_type_text = video_type_name(profile.video_type);
  const std::string pred_text =
      assistant_mode
          ? "Provide 5 possible ADs from a narrator perspective, each "
            "offering a valid and distinct summary by emphasizing different "
            "key characters, actions, and movements present in the scene.\n"
          : "Provide the AD from a narrator perspective.\n";
  const long long limit = stage2_word_limit(duration, profile.speed_factor);

  const std::vector<std::string> examples =
      sample_without_replacement(profile.example_sentences, 10, seed);
  const std::string example_sentence = join(examples, "\n");

  std::string output_template;
  std::vector<std::string> keys;
  if (!assistant_mode) {
    output_template =
        "Output template (in JSON format): \"summarized_AD\": \"\".\n";
    keys = {"summarized_AD"};
  } else {
    output_template = "Output template (in JSON format): ";
    for (int i = 1; i <= 5; ++i) {
      output_template += "\"summarized_AD_" + std::to_string(i) + "\": \"\"";
      output_template += i < 5 ? ", " : ".\n";
      keys.push_back("summarized_AD_" + std::to_string(i));
    }
  }

  PromptBundle b;
  b.system_text =
      "[INST] <<SYS>>\nYou are an intelligent chatbot designed for "
      "summarizing " + video_type_text + " audio descriptions. "
      "Here's how you can accomplish the task:------##INSTRUCTIONS: you "
      "should convert the predicted descriptions into one sentence. "
      "You should directly start the answer with the converted results "
      "WITHOUT providing ANY more sentences at the beginning or at the end. "
      "\n<</SYS>>\n\n{} [/INST] ";
  b.user_text =
      "Please summarize the following description for one movie clip into "
      "ONE succinct audio description (AD) sentence.\n"
      "Description: " + stage1_text + "\n\n"
      "Focus on the most attractive characters, their actions, and related "
      "key objects.\n"
      "For characters, use their first names, remove titles such as 'Mr.' "
      "and 'Dr.'. If names are not available, use pronouns such as 'He' and "
      "'her', do not use expression such as 'a man'.\n"
      "For actions, avoid mentioning the camera, and do not focus on "
      "'talking'.\n"
      "For objects, especially when no characters are involved, prioritize "
      "describing concrete and specific ones.\n"
      "Do not mention characters' mood.\n"
      "Do not hallucinate information that is not mentioned in the input.\n"
      "Try to identify the following motions (with decreasing priorities): " +
      render_verb_list(profile.verb_list) +
      ", and use them in the description.\n" +
      pred_text +
      "Limit the length of the output within " + std::to_string(limit) +
      " words.\n\n" +
      output_template +
      "Here are some example outputs:\n" +
      example_sentence;
  b.expects_json = true;
  b.answer_keys = keys;
  return b;
}

PromptBundle build_char_removal(const std::string& gt_text) {
  if (gt_text.empty()) throw Error("build_char_removal: empty input");
  PromptBundle b;
  b.system_text =
      "You are an intelligent chatbot designed for removing character "
      "information of a sentence. "
      "Here's how you can accomplish the task: "
      "You should replace all character information including names, roles, "
      "and jobs into pronouns (e.g., he, she, they, her, him, them). "
      "Note, objects, locations, and animals are not counted as character "
      "information and should be kept as-is. "
      "You should output the result in JSON format WITHOUT providing ANY "
      "more sentences at the beginning or at the end.";
  b.user_text =
      "Please read the sentence below that describes a video clip:\n\n"
      "Input sentence: \"" + gt_text + "\"\n\n"
      "Replace all character information including names, roles, and jobs "
      "into pronouns (e.g., he, she, they, her, him, them).\n"
      "Note, objects, locations, and animals are not counted as character "
      "information and should be kept as-is.\n"
      "**Examples:**\n"
      "   - Example 1:\n"
      "     - Input sentence: \"Spicoli watches Mr. Hand pass out the "
      "schedule.\"\n"
      "     - Ouput: \"He watches him pass out the schedule.\"\n"
      "   - Example 2:\n"
      "     - Input sentence: \"Waiting for a reply, the inspector has a "
      "look of smug satisfaction as he combs his neat moustache.\"\n"
      "     - Output: \"Waiting for a reply, he has a look of smug "
      "satisfaction as he combs his neat moustache.\"\n"
      "   - Example 3:\n"
      "     - Input sentence: \"Emmerich's eyebrows twitch as he watches "
      "her.\"\n"
      "     - Output: \"His eyebrows twitch as he watches her.\"\n"
      "   - Example 4:\n"
      "     - Input sentence: \"Inside is a second pair of doors.\"\n"
      "     - Output: \"Inside is a second pair of doors.\"\n"
      "   - Example 5:\n"
      "     - Input sentence: \"The blonde saunters over to him in her "
      "striped pantsuit and leans in for a kiss.\"\n"
      "     - Output: \"She saunters over to him in her striped pantsuit "
      "and leans in for a kiss.\"\n"
      "..."
      "**Output Format:**\n"
      "{\n"
      "  \"Output\": <output>\n"
      "}\n\n";
  b.expects_json = true;
  b.answer_keys = {"Output"};
  return b;
}

PromptBundle build_action_split(const std::string& gt_text) {
  if (gt_text.empty()) throw Error("build_action_split: empty input");
  PromptBundle b;
  b.system_text =
      "You are an intelligent chatbot designed for decompose the sentence "
      "into subsentences. "
      "Here's how you can accomplish the task: "
      "You should split (rewrite if needed) the sentence into subsentences, "
      "each containing only one action phrase (i.e., verb phrase). "
      "You should output your answer in JSON format WITHOUT providing ANY "
      "more sentences at the beginning or at the end.";
  b.user_text =
      "Please read the sentence below that describes a video clip:\n\n"
      "Input sentence: \"" + gt_text + "\"\n\n"
      "Split and rewrite the sentence into subsentences, each containing "
      "only one action (i.e., verb phrase) and preserving all other "
      "information (e.g., locations, time, affections, etc.).\n"
      "Do not output repeating actions.\n"
      "**Examples:**\n"
      "   - Example 1:\n"
      "     - Input sentence: \"He watches him pass out the schedule.\"\n"
      "     - Subsentences: [\"He watches him.\", \"He passes out the "
      "schedule.\"]\n"
      "   - Example 2:\n"
      "     - Input sentence: \"Waiting for a reply, he has a look of smug "
      "satisfaction as he combs his neat moustache.\"\n"
      "     - Subsentences: [\"He waits for a reply.\", \"He has a look of "
      "smug satisfaction.\", \"He combs his neat moustache.\"]\n"
      "   - Example 3:\n"
      "     - Input sentence: \"He swings in front of Kingpin, then bounces "
      "off a building and kicks the criminal into the air.\"\n"
      "     - Subsentences: [\"He swings in front of him.\", \"He bounces "
      "off a building.\", \"He kicks him into the air.\"]\n"
      "   - Example 4:\n"
      "     - Input sentence: \"His eyebrows twitch as he watches her.\"\n"
      "     - Subsentences: [\"His eyebrows twitch.\", \"He watches "
      "her.\"]\n"
      "   - Example 5:\n"
      "     - Input sentence: \"Inside is a second pair of doors.\"\n"
      "     - Subsentences: [\"Inside is a second pair of doors.\"]\n"
      "..."
      "**Output Format:**\n"
      "{\n"
      "  \"Subsentences\": \n"
      "  [\n"
      "    <subsentence1>,\n"
      "    <subsentence2>,\n"
      "    <subsentence3>,\n"
      "    ...\n"
      "  ]\n"
      "}\n\n";
  b.expects_json = true;
  b.answer_keys = {"Subsentences"};
  return b;
}

PromptBundle build_llm_action_metric(const std::string& gt_action,
                                     const std::string& prediction) {
  if (gt_action.empty() || prediction.empty())
    throw Error("build_llm_action_metric: empty input");
  PromptBundle b;
  b.system_text =
      "You are an evaluation assistant designed to assess the accuracy of a "
      "description (Des) in capturing the action specified in a reference "
      "sentence (Ref) for a movie clip. "
      "Focus only on the presence of the referenced action and ignore any "
      "additional, unrelated actions in the description. "
      "Ignore any character information in the description. "
      "Avoid assumptions about action details beyond what is explicitly "
      "provided in either the reference or description. "
      "Output the result exclusively in JSON format, with a score (0 to 3) "
      "and a brief explanation describing the relationship between the "
      "actions in Ref and Des, without any introductory or concluding text.";
  b.user_text =
      "You will be provided with a reference action sentence (Ref) and a "
      "description (Des) for a clip. "
      "Your task is to evaluate if the action described in Ref is "
      "explicitly or clearly implied in Des. "
      "Focus only on the presence of the referenced action, without "
      "considering any additional actions and character information that "
      "may appear in Des, and do not assume any actions beyond those stated "
      "in Ref or Des. "
      "The output should be a score (0 to 3) with a brief one-sentence "
      "explanation describing the relationship between the actions in Ref "
      "and Des.\n\n"
      "# Scoring Criteria:\n"
      "- **Score 0:** The action in Ref is completely unrelated to actions "
      "in Des.\n"
      "- **Score 1:** The action in Ref is loosely related to an action in "
      "Des.\n"
      "- **Score 2:** The action in Ref is similar in meaning to an action "
      "in Des.\n"
      "- **Score 3:** The action in Ref exactly matches an action in Des, "
      "using the same verb.\n\n"
      "# Examples:\n"
      "- Example 1:\n"
      "  - Ref: 'He runs across the street.'\n"
      "  - Des: 'Tom is jogging down the street.'\n"
      "  - Output: {\n"
      "      'score': 2,\n"
      "      'explanation': 'The action \"runs across the street\" in Ref "
      "is similar to \"jogging down the street\" in Des.'\n"
      "    }\n\n"
      "- Example 2:\n"
      "  - Ref: 'He pours wine into a glass.'\n"
      "  - Des: 'The woman drinks.'\n"
      "  - Output: {\n"
      "      'score': 1,\n"
      "      'explanation': 'The action \"pours wine into a glass\" in Ref "
      "is loosely related to \"drinks\" in Des.'\n"
      "    }\n\n"
      "..."
      "# Output Format:\n"
      "{\n"
      "  'score': <score>,\n"
      "  'explanation': '<explanation>'\n"
      "}\n\n"
      "# Now, apply these instructions to the following texts:\n\n"
      "   - # Reference (Ref): '" + gt_action + "'\n"
      "   - # Description (Des): '" + prediction + "'";
  b.expects_json = true;
  b.answer_keys = {"score", "explanation"};
  return b;
}

PromptBundle build_ad_eval_judge(const std::string& reference,
                                 const std::string& prediction) {
  if (reference.empty() || prediction.empty())
    throw Error("build_ad_eval_judge: empty input");
  PromptBundle b;
  b.system_text =
      "You are an evaluation assistant that compares a candidate audio "
      "description against a ground-truth audio description of the same "
      "movie clip. "
      "Answer exclusively in JSON with an integer matching score from 1 "
      "(lowest) to 5 (highest) and no other text.";
  b.user_text =
      "Rate how well the candidate audio description matches the "
      "ground-truth audio description on a scale from 1 (lowest) to 5 "
      "(highest). Consider the described characters, actions, and setting; "
      "ignore phrasing differences.\n\n"
      "Ground truth: \"" + reference + "\"\n"
      "Candidate: \"" + prediction + "\"\n\n"
      "Output format:\n"
      "{\n"
      "  \"score\": <1-5>\n"
      "}";
  b.expects_json = true;
  b.answer_keys = {"score"};
  return b;
}

}  // namespace shotad
