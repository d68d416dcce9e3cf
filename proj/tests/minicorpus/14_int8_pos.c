void f(void)
{
    int8_t x = 0;
    (void)x;
}
