#!/usr/bin/env python3
# Copyright (c) 2026 The shotad authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerates the frozen prompt goldens in tests/goldens/.

The templates below are maintained by hand, separately from the C++
builders, so the golden tests compare two independently written renderings
of the same prompt contract. Run from the repository root:

    python3 scripts/oracles/gen_prompt_goldens.py
"""

import os

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "..", "tests",
                       "goldens")

# ---------------------------------------------------------------------------
# Stage I fixture: current shots [2, 3], two known characters, one thread.

KEY_SHOTS = "[Shot 2, Shot 3]"
CHAR_TEXT = ". Possible characters: Alice (red), Bob (green)"
THREAD_TEXT = ("Finally, in one sentence, briefly explain why "
               "[Shot 1, Shot 3] share the same camera setup.\n")

FACTORS = {
    "facial_expression": (
        "4. Describe the facial expressions of characters.\n",
        "Facial expressions",
    ),
    "key_object": (
        "4. Describe the key objects that characters interact with.\n",
        "Key objects",
    ),
    "environment": (
        "4. Describe the environment, focusing on the location, furniture, "
        "entrances and exits, etc.\n",
        "Environment",
    ),
}


def stage1_prompt(factor, with_thread):
    factor_line, template_label = FACTORS[factor]
    factor_numbers = "four"
    thread_text = THREAD_TEXT if with_thread else ""

    labels = ["Main characters", "Actions",
              "Character-character interactions", template_label]
    if with_thread:
        labels.append("Explanation")
    template = "Description:\n" + ";\n".join(
        f"{i + 1}. {label}: ''" for i, label in enumerate(labels)) + "."

    return (
        "Please watch the following movie clip, where different shot "
        "numbers are labelled on the top-left of each frame.\n"
        f"Please briefly describe what happened in {KEY_SHOTS} in the "
        f"{factor_numbers} steps below:\n"
        f"1. Identify main characters (if circles are available)"
        f"{CHAR_TEXT};\n"
        "2. Describe the actions of characters, i.e., who is doing what, "
        "focusing on the movements;\n"
        "3. Describe the interactions between characters, such as "
        "looking;\n"
        f"{factor_line}"
        "Note, colored circles are provided for character indications "
        "only, DO NOT mention them in the description. "
        f"{thread_text}"
        "Make sure you do not hallucinate information.\n"
        "### Answer Template ###\n"
        f"{template}"
    )


# ---------------------------------------------------------------------------
# Stage II fixture: one dense description summarized per dataset profile.

STAGE1_TEXT = ("Alice hands Bob a folded letter while he stands by the "
               "desk, and they exchange a look.")

PROFILES = {
    "cmd_ad": {
        "video_type": "movie",
        "verbs": ['look', 'turn', 'take', 'hold', 'pull', 'walk', 'run',
                  'watch', 'stare', 'grab', 'fall', 'get', 'go', 'open',
                  'smile'],
        "speed_factor": 0.275,
        "duration": 5.5,
        "examples": [
            "He slams the car door and strides across the lot.",
            "She glances over her shoulder, then slips through the gate.",
            "A convoy of trucks rolls down the dusty highway.",
            "He grabs the rifle and ducks behind the overturned table.",
            "She pulls the letter from the drawer.",
            "He smiles faintly and turns back to the window.",
            "They run along the rooftop toward the fire escape.",
            "The detective studies the photographs pinned to the wall.",
            "She falls to her knees beside the wreckage.",
            "He opens the briefcase and counts the money.",
        ],
    },
    "tv_ad": {
        "video_type": "TV series",
        "verbs": ['look', 'walk', 'turn', 'stare', 'take', 'hold', 'smile',
                  'leave', 'pull', 'watch', 'open', 'go', 'step', 'get',
                  'enter'],
        "speed_factor": 0.2695,
        "duration": 5.5,
        "examples": [
            "Back at the flat, she hangs her coat by the door.",
            "He steps into the lift and presses a button.",
            "The nurse wheels a trolley down the corridor.",
            "She stares at the test results on the desk.",
            "He leaves the pub and walks into the rain.",
            "In the kitchen, she stirs a pot on the stove.",
            "The brothers exchange a look across the table.",
            "She enters the office and drops her bag on a chair.",
            "He holds up the photograph to the light.",
            "They watch the ambulance pull away.",
        ],
    },
    "mad_eval": {
        "video_type": "movie",
        "verbs": ['look', 'turn', 'sit', 'walk', 'take', 'stand', 'watch',
                  'hold', 'pull', 'see', 'go', 'open', 'smile', 'run',
                  'get'],
        "speed_factor": 0.5102,
        "duration": 2.55,
        "examples": [
            "He sits at the bar and nurses a drink.",
            "She walks through the crowded station.",
            "The boy stands at the edge of the pool.",
            "He takes the envelope from his pocket.",
            "Rain streaks the windscreen as the car idles.",
            "She looks up at the towering glass building.",
            "He opens the fridge and peers inside.",
            "The dog trots along the fence line.",
            "She holds the baby close and hums.",
            "He turns the key and the engine sputters.",
        ],
    },
}


def stage2_prompt(profile_key, assistant_mode):
    p = PROFILES[profile_key]
    sys_prompt = (
        "[INST] <<SYS>>\nYou are an intelligent chatbot designed for "
        f"summarizing {p['video_type']} audio descriptions. "
        "Here's how you can accomplish the task:------##INSTRUCTIONS: you "
        "should convert the predicted descriptions into one sentence. "
        "You should directly start the answer with the converted results "
        "WITHOUT providing ANY more sentences at the beginning or at the "
        "end. \n<</SYS>>\n\n{} [/INST] "
    )

    if not assistant_mode:
        pred_text = "Provide the AD from a narrator perspective.\n"
        template = "Output template (in JSON format): \"summarized_AD\": \"\".\n"
    else:
        pred_text = ("Provide 5 possible ADs from a narrator perspective, "
                     "each offering a valid and distinct summary by "
                     "emphasizing different key characters, actions, and "
                     "movements present in the scene.\n")
        template = ("Output template (in JSON format): " + ", ".join(
            f"\"summarized_AD_{i}\": \"\"" for i in range(1, 6)) + ".\n")

    verb_list = "[" + ", ".join(f"'{v}'" for v in p["verbs"]) + "]"
    limit = int(p["duration"] / p["speed_factor"] + 1)
    example_sentence = "\n".join(p["examples"])

    user_prompt = (
        "Please summarize the following description for one movie clip "
        "into ONE succinct audio description (AD) sentence.\n"
        f"Description: {STAGE1_TEXT}\n\n"
        "Focus on the most attractive characters, their actions, and "
        "related key objects.\n"
        "For characters, use their first names, remove titles such as "
        "'Mr.' and 'Dr.'. If names are not available, use pronouns such "
        "as 'He' and 'her', do not use expression such as 'a man'.\n"
        "For actions, avoid mentioning the camera, and do not focus on "
        "'talking'.\n"
        "For objects, especially when no characters are involved, "
        "prioritize describing concrete and specific ones.\n"
        "Do not mention characters' mood.\n"
        "Do not hallucinate information that is not mentioned in the "
        "input.\n"
        "Try to identify the following motions (with decreasing "
        f"priorities): {verb_list}, and use them in the description.\n"
        f"{pred_text}"
        f"Limit the length of the output within {limit} words.\n\n"
        f"{template}"
        "Here are some example outputs:\n"
        f"{example_sentence}"
    )
    return sys_prompt + "\n<<<USER>>>\n" + user_prompt


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    for factor in FACTORS:
        for with_thread in (True, False):
            suffix = "thread" if with_thread else "nothread"
            path = os.path.join(OUT_DIR, f"stage1_{factor}_{suffix}.txt")
            with open(path, "w", newline="") as f:
                f.write(stage1_prompt(factor, with_thread))
    for profile_key in PROFILES:
        for assistant in (False, True):
            suffix = "assistant" if assistant else "single"
            path = os.path.join(OUT_DIR, f"stage2_{profile_key}_{suffix}.txt")
            with open(path, "w", newline="") as f:
                f.write(stage2_prompt(profile_key, assistant))
    print(f"wrote 12 goldens to {os.path.normpath(OUT_DIR)}")


if __name__ == "__main__":
    main()
