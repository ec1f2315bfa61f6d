/*
 * C interface to the myoctl engine.
 *
 * Every fallible call returns a myoctl_status; on failure the message (and, for
 * validation errors, the offending field) is available from myoctl_last_error()
 * / myoctl_last_error_field() on the same thread until the next call.
 * Strings handed out by the library are released with myoctl_free().
 */
#ifndef MYOCTL_H
#define MYOCTL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MYOCTL_BUILDING)
#    define MYOCTL_API __declspec(dllexport)
#  else
#    define MYOCTL_API __declspec(dllimport)
#  endif
#else
#  define MYOCTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum myoctl_status {
    MYOCTL_OK = 0,
    MYOCTL_ERR_VALIDATION = 1,
    MYOCTL_ERR_STATE = 2,
    MYOCTL_ERR_CALIBRATION_REQUIRED = 3,
    MYOCTL_ERR_INVALID_CALIBRATION = 4,
    MYOCTL_ERR_INSUFFICIENT_DATA = 5,
    MYOCTL_ERR_PARSE = 6,
    MYOCTL_ERR_SCHEMA = 7,
    MYOCTL_ERR_UNSUPPORTED_VERSION = 8,
    MYOCTL_ERR_IO = 9,
    MYOCTL_ERR_CONTRACT = 10,
    MYOCTL_ERR_INVALID_ARGUMENT = 11,
    MYOCTL_ERR_INTERNAL = 12
} myoctl_status;

typedef struct myoctl_engine myoctl_engine;
typedef struct myoctl_subscription myoctl_subscription;

typedef struct myoctl_tick_stats {
    int64_t ticks;
    double max_late_ms;
    int64_t late_ticks;
} myoctl_tick_stats;

MYOCTL_API const char* myoctl_version(void);
MYOCTL_API const char* myoctl_status_name(myoctl_status status);
MYOCTL_API const char* myoctl_last_error(void);
MYOCTL_API const char* myoctl_last_error_field(void);
MYOCTL_API void myoctl_free(char* str);

/* Engine lifecycle: create -> adjust -> open_sim | open_replay -> (listen) -> run -> export. */
MYOCTL_API myoctl_status myoctl_engine_create(const char* config_json, myoctl_engine** out);
MYOCTL_API myoctl_status myoctl_engine_load(const char* config_path, myoctl_engine** out);
MYOCTL_API void myoctl_engine_destroy(myoctl_engine* engine);

MYOCTL_API myoctl_status myoctl_engine_set_seed(myoctl_engine* engine, uint64_t seed);
MYOCTL_API myoctl_status myoctl_engine_set_model(myoctl_engine* engine, const char* preset_or_path);
MYOCTL_API myoctl_status myoctl_engine_set_script(myoctl_engine* engine, const char* path);
MYOCTL_API myoctl_status myoctl_engine_set_paced(myoctl_engine* engine, int paced);

MYOCTL_API myoctl_status myoctl_engine_open_sim(myoctl_engine* engine);
/* Header, calibration and recorded commands come from the file. */
MYOCTL_API myoctl_status myoctl_engine_open_replay(myoctl_engine* engine, const char* session_path);

/* Blocks the calling thread, which becomes the tick thread. duration_ms < 0
 * runs until the source ends or myoctl_engine_interrupt() is called. */
MYOCTL_API myoctl_status myoctl_engine_run(myoctl_engine* engine, int64_t duration_ms);
MYOCTL_API myoctl_status myoctl_engine_interrupt(myoctl_engine* engine);

/* Any thread. `reply_json` (optional) receives the ack or error message. */
MYOCTL_API myoctl_status myoctl_engine_command(myoctl_engine* engine, const char* message_json, char** reply_json);

MYOCTL_API myoctl_status myoctl_engine_subscribe(myoctl_engine* engine, size_t capacity, myoctl_subscription** out);
/* Returns 1 and a message in *message_json, or 0 when nothing is queued. */
MYOCTL_API int myoctl_subscription_poll(myoctl_subscription* sub, char** message_json);
MYOCTL_API uint64_t myoctl_subscription_dropped(const myoctl_subscription* sub);
MYOCTL_API void myoctl_subscription_destroy(myoctl_subscription* sub);

/* "ADDR:PORT"; port 0 picks a free one, reported in *bound_port. */
MYOCTL_API myoctl_status myoctl_engine_listen(myoctl_engine* engine, const char* endpoint, uint16_t* bound_port);

MYOCTL_API int64_t myoctl_engine_row_count(const myoctl_engine* engine);
MYOCTL_API myoctl_status myoctl_engine_stats(const myoctl_engine* engine, myoctl_tick_stats* out);
MYOCTL_API myoctl_status myoctl_engine_export_csv(const myoctl_engine* engine, const char* path);

/* Metrics JSON for a recorded session; holds_path (optional) is an intent script. */
MYOCTL_API myoctl_status myoctl_analyze_file(const char* record_path, const char* holds_path, double hold_fraction,
                                             char** metrics_json);

/* Stateless signal and control primitives. */
MYOCTL_API myoctl_status myoctl_quantize(double volts, int* raw);
MYOCTL_API myoctl_status myoctl_normalize(int raw, int rest_raw, int mvc_raw, double* percent);
MYOCTL_API double myoctl_onoff_step(double emg, double th);
MYOCTL_API double myoctl_proportional_map(double emg, double th1, double th2, int literal);
MYOCTL_API double myoctl_deadband_step(double r, double x, double delta);
MYOCTL_API double myoctl_rescale(double r, double delta);

#ifdef __cplusplus
}
#endif

#endif /* MYOCTL_H */
